#ifndef ESPR_ENSEMBLE_HPP
#define ESPR_ENSEMBLE_HPP

#include <cstddef>
#include <istream>
#include <map>
#include <sstream>
#include <vector>

#include "espr/distribution.hpp"
#include "espr/graph.hpp"
#include "espr/graph_io.hpp"
#include "espr/state.hpp"

namespace espr {

/// Probability-weighted collection of concrete graphs. The weights sum
/// to one and every member carries positive weight.
template <ProbabilityScalar S>
class GraphEnsemble {
public:
    struct Member {
        Graph graph;
        S weight;
    };

    explicit GraphEnsemble(std::vector<Member> members) : members_(std::move(members)) {
        if (members_.empty()) throw std::invalid_argument("ensemble needs at least one member");
        S sum(0);
        for (const auto& m : members_) {
            if (!(m.weight > S(0))) throw std::invalid_argument("ensemble weights must be positive");
            sum += m.weight;
        }
        if (!within<S>(sum, S(1), 1e-12))
            throw std::invalid_argument("ensemble weights must sum to 1");
    }

    static GraphEnsemble singleton(Graph g) {
        return GraphEnsemble({Member{std::move(g), S(1)}});
    }

    const std::vector<Member>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    /// Largest member size.
    int max_node_count() const {
        int n = 0;
        for (const auto& m : members_) n = std::max(n, m.graph.node_count());
        return n;
    }

private:
    std::vector<Member> members_;
};

/// One exhaustive deletion step: every member branches over every
/// possible victim, weighted by that victim's removal probability.
/// Outcomes with identical node labels and edge sets are merged by
/// summing weights (no isomorphism matching); zero-probability victims
/// produce no member. Exceeding `member_cap` outcomes is an error
/// rather than a silent truncation.
template <ProbabilityScalar S>
GraphEnsemble<S> enumerate_deletion_step(const GraphEnsemble<S>& e, DeletionRule rule,
                                         std::size_t member_cap = 1000000) {
    std::map<Graph, S> merged;
    for (const auto& m : e.members()) {
        if (m.graph.node_count() < 2)
            throw std::invalid_argument("deletion step requires members with at least 2 nodes");
        const auto probs = deletion_probabilities<S>(m.graph, rule);
        for (const auto& [v, qv] : probs.by_node) {
            if (qv == S(0)) continue;
            Graph next = delete_node(m.graph, v);
            merged[std::move(next)] += m.weight * qv;
            if (merged.size() > member_cap)
                throw std::runtime_error("deletion enumeration exceeded member cap");
        }
    }
    std::vector<typename GraphEnsemble<S>::Member> members;
    members.reserve(merged.size());
    for (auto& [g, w] : merged) members.push_back({g, w});
    return GraphEnsemble<S>(std::move(members));
}

/// Weight-convex combination of per-member degree distributions,
/// padded to the largest member size; a longer minimum length may be
/// requested for presentation.
template <ProbabilityScalar S>
DegreeDistribution<S> average_degree_distribution(const GraphEnsemble<S>& e,
                                                  Eigen::Index min_length = 0) {
    const Eigen::Index len = std::max<Eigen::Index>(e.max_node_count(), min_length);
    DegreeDistribution<S> avg = DegreeDistribution<S>::Constant(len, S(0));
    for (const auto& m : e.members())
        avg += m.weight * padded(degree_distribution<S>(m.graph), len);
    return avg;
}

/// Bridges an ensemble into the (n,k) state space: the mass at (n,k)
/// is the probability that a member of size n is drawn and a uniformly
/// chosen node of it has degree k.
template <ProbabilityScalar S>
StateDistribution<S> state_distribution_of(const GraphEnsemble<S>& e) {
    StateDistribution<S> sd;
    for (const auto& m : e.members()) {
        const int n = m.graph.node_count();
        const auto census = m.graph.degree_census();
        for (int k = 0; k < n; ++k) {
            if (census[k] == 0) continue;
            sd.add(NodeState{n, k}, m.weight * ratio<S>(census[k], n));
        }
    }
    return sd;
}

/// Structured text serialization: one "member <weight>" header per
/// member followed by its edge list, weights exact in rational mode.
template <ProbabilityScalar S>
std::string format_ensemble(const GraphEnsemble<S>& e) {
    std::ostringstream out;
    out << "ensemble " << e.size() << "\n";
    for (const auto& m : e.members()) {
        out << "member " << format_scalar<S>(m.weight) << "\n";
        out << format_edge_list(m.graph);
    }
    return out.str();
}

template <ProbabilityScalar S>
GraphEnsemble<S> parse_ensemble(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("ensemble ", 0) != 0)
        throw std::invalid_argument("ensemble document must start with 'ensemble <count>'");
    std::vector<typename GraphEnsemble<S>::Member> members;
    std::string pending_weight;
    std::string body;
    auto flush = [&]() {
        if (pending_weight.empty()) return;
        members.push_back({parse_edge_list(body), parse_scalar<S>(pending_weight)});
        body.clear();
    };
    while (std::getline(in, line)) {
        if (line.rfind("member ", 0) == 0) {
            flush();
            pending_weight = line.substr(7);
        } else {
            body += line + "\n";
        }
    }
    flush();
    return GraphEnsemble<S>(std::move(members));
}

} // namespace espr

#endif // ESPR_ENSEMBLE_HPP
