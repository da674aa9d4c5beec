#ifndef ESPR_MONTECARLO_HPP
#define ESPR_MONTECARLO_HPP

#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "espr/graph.hpp"
#include "espr/state.hpp"

namespace espr {

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based stream derivation: trials get independent generators
/// from (seed, trial_index) alone, so scheduling order never matters.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t counter) {
        std::uint64_t s = seed;
        state_ = splitmix64(s);
        s ^= counter * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL;
        state_ ^= splitmix64(s);
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next_u64() {
        // xorshift* core on the derived state
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), rejection-free bias via bound check.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

private:
    std::uint64_t state_;
};

} // namespace rng

/// Mutable adjacency structure the trial loop evolves in place.
/// Slots are compacted on deletion (last node moves into the hole);
/// original labels ride along so debug snapshots stay meaningful.
class EvolvingGraph {
public:
    explicit EvolvingGraph(const Graph& g) {
        const auto& labels = g.labels();
        adj_.resize(labels.size());
        labels_ = labels;
        next_label_ = labels.empty() ? 1 : labels.back() + 1;
        for (const auto& e : g.edges()) {
            const int a = index_of(labels, e.first);
            const int b = index_of(labels, e.second);
            adj_[a].push_back(b);
            adj_[b].push_back(a);
        }
        total_degree_ = 2 * g.edge_count();
    }

    int node_count() const { return static_cast<int>(adj_.size()); }
    long edge_count() const { return total_degree_ / 2; }
    long total_degree() const { return total_degree_; }
    int degree(int i) const { return static_cast<int>(adj_[i].size()); }

    /// Adds a node attached to the given distinct existing slots.
    void add_node(const std::vector<int>& targets) {
        const int v = node_count();
        adj_.emplace_back();
        labels_.push_back(next_label_++);
        for (int t : targets) {
            adj_[t].push_back(v);
            adj_[v].push_back(t);
        }
        total_degree_ += 2 * static_cast<long>(targets.size());
    }

    void delete_node(int i) {
        total_degree_ -= 2 * static_cast<long>(adj_[i].size());
        for (int nb : adj_[i]) unlink(nb, i);
        const int last = node_count() - 1;
        if (i != last) {
            adj_[i] = std::move(adj_[last]);
            labels_[i] = labels_[last];
            for (int nb : adj_[i]) relink(nb, last, i);
        }
        adj_.pop_back();
        labels_.pop_back();
    }

    std::vector<int> degree_census() const {
        std::vector<int> census(adj_.size(), 0);
        for (const auto& nb : adj_) ++census[nb.size()];
        return census;
    }

    Graph snapshot() const {
        std::vector<Graph::Edge> edges;
        for (int i = 0; i < node_count(); ++i)
            for (int j : adj_[i])
                if (i < j)
                    edges.emplace_back(std::min(labels_[i], labels_[j]),
                                       std::max(labels_[i], labels_[j]));
        return Graph(labels_, std::move(edges));
    }

private:
    static int index_of(const std::vector<int>& labels, int v) {
        auto it = std::lower_bound(labels.begin(), labels.end(), v);
        return static_cast<int>(it - labels.begin());
    }

    void unlink(int node, int target) {
        auto& nb = adj_[node];
        for (std::size_t j = 0; j < nb.size(); ++j) {
            if (nb[j] == target) {
                nb[j] = nb.back();
                nb.pop_back();
                return;
            }
        }
    }

    void relink(int node, int from, int to) {
        for (int& x : adj_[node])
            if (x == from) x = to;
    }

    std::vector<std::vector<int>> adj_;
    std::vector<int> labels_;
    int next_label_ = 1;
    long total_degree_ = 0;
};

/// Samples a deletion victim slot under the rule; degree-proportional
/// selection on an edgeless graph falls back to uniform, mirroring
/// deletion_probabilities.
inline int sample_deletion_victim(const EvolvingGraph& g, DeletionRule rule, rng::Stream& rs) {
    const int n = g.node_count();
    if (rule == DeletionRule::DegreeProportional && g.total_degree() > 0) {
        const long total = g.total_degree();
        long ticket = static_cast<long>(rs.next_below(static_cast<std::uint64_t>(total)));
        for (int i = 0; i < n; ++i) {
            ticket -= g.degree(i);
            if (ticket < 0) return i;
        }
        return n - 1; // unreachable
    }
    return static_cast<int>(rs.next_below(static_cast<std::uint64_t>(n)));
}

/// Samples m distinct attachment target slots among the existing
/// nodes. Preferential selection is degree-proportional without
/// replacement; once no unchosen node has positive degree the rest are
/// filled uniformly.
inline std::vector<int> sample_attachment_targets(const EvolvingGraph& g, int m,
                                                  AttachmentRule attach, rng::Stream& rs) {
    const int n = g.node_count();
    std::vector<int> chosen;
    chosen.reserve(m);
    auto already = [&](int v) {
        for (int c : chosen)
            if (c == v) return true;
        return false;
    };
    if (attach == AttachmentRule::PreferentialAttach && g.total_degree() > 0) {
        long remaining_degree = g.total_degree();
        while (static_cast<int>(chosen.size()) < m && remaining_degree > 0) {
            long ticket = static_cast<long>(rs.next_below(static_cast<std::uint64_t>(remaining_degree)));
            int pick = -1;
            for (int i = 0; i < n; ++i) {
                if (already(i)) continue;
                ticket -= g.degree(i);
                if (ticket < 0) {
                    pick = i;
                    break;
                }
            }
            chosen.push_back(pick);
            remaining_degree -= g.degree(pick);
        }
    }
    while (static_cast<int>(chosen.size()) < m) {
        int pick;
        do {
            pick = static_cast<int>(rs.next_below(static_cast<std::uint64_t>(n)));
        } while (already(pick));
        chosen.push_back(pick);
    }
    return chosen;
}

struct SimConfig {
    EvolutionRule<double> rule;
    long t_max = 1000;
    long trials = 1;
    std::uint64_t seed = 1;
    std::optional<long> burn_in;        // steps discarded before sampling; default t_max/2
    std::optional<Graph> initial_graph; // default: complete graph on n_floor nodes
    bool debug_snapshots = false;       // keep Graph snapshots (small networks only)
    bool cap_sizes = false;             // treat rule.n_cap as a growth no-op boundary

    long effective_burn_in() const { return burn_in ? *burn_in : t_max / 2; }

    void validate() const {
        rule.validate();
        if (trials < 1) throw std::invalid_argument("trials must be >= 1");
        if (t_max < 0) throw std::invalid_argument("t_max must be >= 0");
        const long b = effective_burn_in();
        if (b < 0 || b > t_max)
            throw std::invalid_argument("burn_in must lie in [0, t_max]");
        if (initial_graph && initial_graph->node_count() < rule.n_floor)
            throw std::invalid_argument("initial graph smaller than n_floor");
        if (debug_snapshots && initial_graph && initial_graph->node_count() > 20)
            throw std::invalid_argument("debug snapshots are limited to networks of size <= 20");
    }
};

/// Per-trial summary: running sums of the per-step degree fractions
/// (for the empirical estimator) plus end-of-trial statistics.
struct TrialSummary {
    std::vector<double> fraction_sum;    // sum over snapshots of census_k / n
    std::vector<double> fraction_sq_sum; // sum of squares, for standard errors
    long snapshots = 0;
    int final_nodes = 0;
    long final_edges = 0;
    std::vector<Graph> debug_snapshots;
};

namespace detail {

inline void accumulate_fractions(TrialSummary& acc, const std::vector<int>& census, int n) {
    if (acc.fraction_sum.size() < census.size()) {
        acc.fraction_sum.resize(census.size(), 0.0);
        acc.fraction_sq_sum.resize(census.size(), 0.0);
    }
    for (std::size_t k = 0; k < census.size(); ++k) {
        if (census[k] == 0) continue;
        const double f = static_cast<double>(census[k]) / static_cast<double>(n);
        acc.fraction_sum[k] += f;
        acc.fraction_sq_sum[k] += f * f;
    }
    ++acc.snapshots;
}

} // namespace detail

/// One independent trajectory of the evolution rule. Deterministic
/// given (cfg.seed, trial_index) no matter how trials are scheduled.
inline TrialSummary run_trial(const SimConfig& cfg, long trial_index) {
    cfg.validate();
    rng::Stream rs(cfg.seed, static_cast<std::uint64_t>(trial_index));
    EvolvingGraph g(cfg.initial_graph ? *cfg.initial_graph
                                      : Graph::complete(cfg.rule.n_floor));
    const long burn = cfg.effective_burn_in();
    TrialSummary out;
    auto record = [&]() {
        detail::accumulate_fractions(out, g.degree_census(), g.node_count());
        if (cfg.debug_snapshots) out.debug_snapshots.push_back(g.snapshot());
    };
    if (burn == 0) record();
    for (long t = 1; t <= cfg.t_max; ++t) {
        const double u = rs.next_unit();
        if (u < cfg.rule.p) {
            if (!(cfg.cap_sizes && g.node_count() >= cfg.rule.n_cap)) {
                const auto targets =
                    sample_attachment_targets(g, cfg.rule.m, cfg.rule.attach, rs);
                g.add_node(targets);
            }
        } else if (g.node_count() > cfg.rule.n_floor) {
            g.delete_node(sample_deletion_victim(g, cfg.rule.del, rs));
        }
        if (t >= burn) record();
    }
    out.final_nodes = g.node_count();
    out.final_edges = g.edge_count();
    return out;
}

struct EmpiricalDistribution {
    Eigen::VectorXd probs;
    Eigen::VectorXd std_error;
    long snapshots = 0;
};

/// Averages the post-burn-in degree censuses over all trials. Trials
/// are distributed over workers in fixed-size blocks and reduced in
/// block order, so the result is bit-identical for any worker count.
inline EmpiricalDistribution empirical_degree_distribution(const SimConfig& cfg,
                                                           int workers = 1) {
    cfg.validate();
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");

    constexpr long kBlock = 64;
    const long nblocks = (cfg.trials + kBlock - 1) / kBlock;
    std::vector<TrialSummary> partials(static_cast<std::size_t>(nblocks));

    std::atomic<long> next_block{0};
    auto drain = [&]() {
        long b;
        while ((b = next_block.fetch_add(1)) < nblocks) {
            TrialSummary acc;
            const long lo = b * kBlock;
            const long hi = std::min(cfg.trials, lo + kBlock);
            for (long t = lo; t < hi; ++t) {
                TrialSummary one = run_trial(cfg, t);
                if (acc.fraction_sum.size() < one.fraction_sum.size()) {
                    acc.fraction_sum.resize(one.fraction_sum.size(), 0.0);
                    acc.fraction_sq_sum.resize(one.fraction_sq_sum.size(), 0.0);
                }
                for (std::size_t k = 0; k < one.fraction_sum.size(); ++k) {
                    acc.fraction_sum[k] += one.fraction_sum[k];
                    acc.fraction_sq_sum[k] += one.fraction_sq_sum[k];
                }
                acc.snapshots += one.snapshots;
            }
            partials[static_cast<std::size_t>(b)] = std::move(acc);
        }
    };

    if (workers == 1 || nblocks == 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        const int nthreads = static_cast<int>(std::min<long>(workers, nblocks));
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(drain);
        for (auto& th : pool) th.join();
    }

    std::size_t len = 0;
    for (const auto& pb : partials) len = std::max(len, pb.fraction_sum.size());
    std::vector<double> sum(len, 0.0), sq(len, 0.0);
    long snapshots = 0;
    for (const auto& pb : partials) {
        for (std::size_t k = 0; k < pb.fraction_sum.size(); ++k) {
            sum[k] += pb.fraction_sum[k];
            sq[k] += pb.fraction_sq_sum[k];
        }
        snapshots += pb.snapshots;
    }

    EmpiricalDistribution out;
    out.snapshots = snapshots;
    out.probs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(len));
    out.std_error = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(len));
    if (snapshots == 0) return out;
    const double n = static_cast<double>(snapshots);
    for (std::size_t k = 0; k < len; ++k) {
        const double mean = sum[k] / n;
        const double var = std::max(0.0, sq[k] / n - mean * mean);
        out.probs[static_cast<Eigen::Index>(k)] = mean;
        out.std_error[static_cast<Eigen::Index>(k)] = std::sqrt(var / n);
    }
    return out;
}

} // namespace espr

#endif // ESPR_MONTECARLO_HPP
