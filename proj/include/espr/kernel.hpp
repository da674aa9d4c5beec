#ifndef ESPR_KERNEL_HPP
#define ESPR_KERNEL_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "espr/ensemble.hpp"
#include "espr/state.hpp"

namespace espr {

template <ProbabilityScalar S>
struct TransitionRow {
    NodeState source;
    std::map<NodeState, S> targets;

    S total() const {
        S acc(0);
        for (const auto& [t, w] : targets) acc += w;
        return acc;
    }
};

/// Survival outcomes for a node when some other node is deleted: the
/// victim is a non-neighbor (degree keeps) or a neighbor (degree drops
/// by one). stay + lose_one = 1 - q_v.
template <ProbabilityScalar S>
struct SurvivorProbabilities {
    S stay{0};
    S lose_one{0};
};

/// Growth fragment of a transition row: the state either keeps its
/// degree, gains an edge from the newcomer, or plays the newcomer
/// itself (entering at degree m). Fragment mass totals p.
template <ProbabilityScalar S>
std::map<NodeState, S> growth_transitions(NodeState s, const EvolutionRule<S>& rule,
                                          std::optional<std::type_identity_t<S>> mean_degree =
                                              std::nullopt) {
    std::map<NodeState, S> targets;
    if (rule.p == S(0)) return targets;
    const int n = s.n;
    const int m = rule.m;
    if (m > n)
        throw std::invalid_argument("cannot attach " + std::to_string(m) +
                                    " distinct edges in a network of size " + std::to_string(n));
    S gain; // probability that this particular survivor receives an edge
    if (rule.attach == AttachmentRule::UniformAttach) {
        gain = ratio<S>(m, n);
    } else {
        if (!mean_degree)
            throw std::invalid_argument("preferential attachment needs the mean degree at size n");
        if (*mean_degree == S(0)) {
            gain = ratio<S>(m, n); // edgeless network: no degrees to prefer
        } else {
            gain = S(m) * ratio<S>(s.k, n) / *mean_degree;
            if (S(1) < gain) gain = S(1);
        }
    }
    const S existing = rule.p * ratio<S>(n, n + 1);
    const S keep = existing * (S(1) - gain);
    const S step_up = existing * gain;
    if (keep != S(0)) targets[NodeState{n + 1, s.k}] += keep;
    if (step_up != S(0)) targets[NodeState{n + 1, s.k + 1}] += step_up;
    targets[NodeState{n + 1, m}] += rule.p * ratio<S>(1, n + 1);
    return targets;
}

/// Uniform-deletion decay fragment: mass (n-k-1)q/(n-1) keeps the
/// degree, kq/(n-1) drops it by one. The deleted node's own mass is
/// already folded into these coefficients by the ensemble
/// reconstruction, so the fragment totals exactly q.
template <ProbabilityScalar S>
std::map<NodeState, S> uniform_deletion_transitions(NodeState s, const S& q_decay) {
    if (s.n < 2) throw std::invalid_argument("decay needs a network of size >= 2");
    std::map<NodeState, S> targets;
    if (q_decay == S(0)) return targets;
    const int n = s.n;
    const int k = s.k;
    const S keep = q_decay * ratio<S>(n - k - 1, n - 1);
    if (keep != S(0)) targets[NodeState{n - 1, k}] += keep;
    if (k > 0) targets[NodeState{n - 1, k - 1}] += q_decay * ratio<S>(k, n - 1);
    return targets;
}

/// Node-level survivor probabilities: sums of removal probabilities
/// over non-neighbors (strictly excluding v itself) and neighbors.
template <ProbabilityScalar S>
SurvivorProbabilities<S> survivor_transitions(const Graph& g, int v,
                                              const DeletionProbabilities<S>& probs) {
    if (g.node_count() < 2) throw std::invalid_argument("survivor step needs >= 2 nodes");
    const auto nb = g.neighbors(v);
    const std::set<int> neighbor_set(nb.begin(), nb.end());
    SurvivorProbabilities<S> out;
    for (const auto& [w, qw] : probs.by_node) {
        if (w == v) continue;
        if (neighbor_set.count(w)) out.lose_one += qw;
        else out.stay += qw;
    }
    return out;
}

template <ProbabilityScalar S>
SurvivorProbabilities<S> survivor_transitions(const Graph& g, int v, DeletionRule rule) {
    return survivor_transitions(g, v, deletion_probabilities<S>(g, rule));
}

/// Everything the decay step needs to know about one size class:
/// the size-conditional degree distribution, the per-state removal
/// probability, and the per-state survivor probabilities. Built either
/// exactly from an ensemble or from a state distribution under the
/// mean-field closure.
template <ProbabilityScalar S>
struct DecayContext {
    int n = 0;
    DegreeDistribution<S> cond;                      // length n, sums to 1
    std::vector<S> q_state;                          // q_(n,k)
    std::vector<SurvivorProbabilities<S>> survivor;  // per degree
    std::vector<char> occupied;                      // exact mode: has any node
};

template <ProbabilityScalar S>
DecayContext<S> decay_context_from_ensemble(const GraphEnsemble<S>& e, int n,
                                            DeletionRule rule) {
    DecayContext<S> ctx;
    ctx.n = n;
    ctx.cond = DegreeDistribution<S>::Constant(n, S(0));
    ctx.q_state.assign(n, S(0));
    ctx.survivor.assign(n, {});
    ctx.occupied.assign(n, 0);

    std::vector<S> node_mass(n, S(0)); // sum of member weights per degree
    S class_weight(0);
    for (const auto& m : e.members()) {
        if (m.graph.node_count() != n) continue;
        class_weight += m.weight;
        const auto probs = deletion_probabilities<S>(m.graph, rule);
        for (int v : m.graph.labels()) {
            const int k = m.graph.degree(v);
            const auto sp = survivor_transitions<S>(m.graph, v, probs);
            node_mass[k] += m.weight;
            ctx.q_state[k] += m.weight * probs.at(v);
            ctx.survivor[k].stay += m.weight * sp.stay;
            ctx.survivor[k].lose_one += m.weight * sp.lose_one;
            ctx.occupied[k] = 1;
        }
    }
    if (class_weight == S(0))
        throw std::invalid_argument("no ensemble member of size " + std::to_string(n));
    for (int k = 0; k < n; ++k) {
        if (!ctx.occupied[k]) continue;
        ctx.cond[k] = node_mass[k] / (class_weight * S(n));
        ctx.q_state[k] = ctx.q_state[k] / node_mass[k];
        ctx.survivor[k].stay = ctx.survivor[k].stay / node_mass[k];
        ctx.survivor[k].lose_one = ctx.survivor[k].lose_one / node_mass[k];
    }
    return ctx;
}

/// Weight-and-multiplicity average of survivor_transitions over every
/// node occupying the given state across the ensemble.
template <ProbabilityScalar S>
SurvivorProbabilities<S> state_level_survivor_row(const GraphEnsemble<S>& e, NodeState s,
                                                  DeletionRule rule) {
    const auto ctx = decay_context_from_ensemble(e, s.n, rule);
    if (s.k < 0 || s.k >= s.n || !ctx.occupied[s.k])
        throw std::invalid_argument("state " + to_string(s) + " is unoccupied");
    return ctx.survivor[s.k];
}

/// Mean-field closure: neighbors are drawn from the degree-biased
/// distribution, so under degree-proportional deletion a degree-k node
/// loses an edge with probability k<k^2>/(n kbar^2). Reduces to the
/// exact (n-1-k)/n, k/n split under uniform deletion.
template <ProbabilityScalar S>
DecayContext<S> decay_context_mean_field(const DegreeDistribution<S>& cond, int n,
                                         DeletionRule rule) {
    if (cond.size() != n) throw std::invalid_argument("conditional distribution length != n");
    DecayContext<S> ctx;
    ctx.n = n;
    ctx.cond = cond;
    ctx.q_state.assign(n, S(0));
    ctx.survivor.assign(n, {});
    ctx.occupied.assign(n, 1);

    S mean_degree(0), second_moment(0);
    for (int k = 0; k < n; ++k) {
        mean_degree += S(k) * cond[k];
        second_moment += S(k) * S(k) * cond[k];
    }
    const bool degree_weighted =
        rule == DeletionRule::DegreeProportional && mean_degree != S(0);
    for (int k = 0; k < n; ++k) {
        const S qv = degree_weighted ? ratio<S>(k, n) / mean_degree : ratio<S>(1, n);
        S lose;
        if (degree_weighted) {
            lose = S(k) * second_moment / (S(n) * mean_degree * mean_degree);
        } else {
            lose = ratio<S>(k, n);
        }
        if (k == n - 1 || (S(1) - qv) < lose) lose = S(1) - qv; // all others adjacent
        ctx.q_state[k] = qv;
        ctx.survivor[k].lose_one = lose;
        ctx.survivor[k].stay = S(1) - qv - lose;
    }
    return ctx;
}

enum class ReassignmentForm {
    Simplified, // n q_v/(n-1) [P_k' stay_k' + P_{k'+1} lose_{k'+1}], up to the caller's q_v
    General,    // normalized two-factor form
};

/// Distribution over the degree the deleted node's mass re-enters at
/// (length n-1, sums to 1). The caller scales by the deleted node's
/// own removal probability when assembling a row.
template <ProbabilityScalar S>
DegreeDistribution<S> reassignment_distribution(const DecayContext<S>& ctx,
                                                ReassignmentForm form = ReassignmentForm::Simplified) {
    const int n = ctx.n;
    if (n < 2) throw std::invalid_argument("reassignment needs size >= 2");
    DegreeDistribution<S> r = DegreeDistribution<S>::Constant(n - 1, S(0));
    if (form == ReassignmentForm::Simplified) {
        const S factor = ratio<S>(n, n - 1);
        for (int kp = 0; kp < n - 1; ++kp) {
            S acc = ctx.cond[kp] * ctx.survivor[kp].stay;
            acc += ctx.cond[kp + 1] * ctx.survivor[kp + 1].lose_one;
            r[kp] = factor * acc;
        }
        return r;
    }
    // General form: each term is (1-q)P/Z times the share of the
    // survivor mass that lands on k'.
    S z(0);
    for (int j = 0; j < n; ++j) z += ctx.cond[j] * (S(1) - ctx.q_state[j]);
    if (z == S(0)) throw std::domain_error("all state mass is deleted; reassignment undefined");
    auto term = [&](int j, const S& share) -> S {
        if (j < 0 || j >= n || ctx.cond[j] == S(0)) return S(0);
        const S denom = ctx.survivor[j].stay + ctx.survivor[j].lose_one;
        if (denom == S(0)) return S(0);
        return ((S(1) - ctx.q_state[j]) * ctx.cond[j] / z) * (share / denom);
    };
    for (int kp = 0; kp < n - 1; ++kp)
        r[kp] = term(kp, ctx.survivor[kp].stay) + term(kp + 1, ctx.survivor[kp + 1].lose_one);
    return r;
}

/// Full decay row for a source state: survivor flow on the diagonal
/// pair plus the reassignment flow scaled by the state's own removal
/// probability. Rows are stochastic.
template <ProbabilityScalar S>
TransitionRow<S> decay_transition_row(const DecayContext<S>& ctx, int k,
                                      ReassignmentForm form = ReassignmentForm::Simplified) {
    const int n = ctx.n;
    if (k < 0 || k >= n || !ctx.occupied[k])
        throw std::invalid_argument("state (" + std::to_string(n) + "," + std::to_string(k) +
                                    ") is unoccupied");
    const auto r = reassignment_distribution(ctx, form);
    TransitionRow<S> row;
    row.source = NodeState{n, k};
    for (int kp = 0; kp < n - 1; ++kp) {
        S mass = ctx.q_state[k] * r[kp];
        if (kp == k) mass += ctx.survivor[k].stay;
        if (kp == k - 1) mass += ctx.survivor[k].lose_one;
        if (mass != S(0)) row.targets[NodeState{n - 1, kp}] = mass;
    }
    return row;
}

/// One exact decay step in state space, driven by ensemble topology:
/// the kernel-side counterpart of enumerate_deletion_step.
template <ProbabilityScalar S>
StateDistribution<S> decay_step_exact(const GraphEnsemble<S>& e, DeletionRule rule,
                                      ReassignmentForm form = ReassignmentForm::Simplified) {
    const auto sd = state_distribution_of(e);
    std::set<int> sizes;
    for (const auto& [s, mass] : sd.mass()) sizes.insert(s.n);
    StateDistribution<S> out;
    std::map<int, DecayContext<S>> contexts;
    for (int n : sizes) contexts.emplace(n, decay_context_from_ensemble(e, n, rule));
    for (const auto& [s, mass] : sd.mass()) {
        const auto row = decay_transition_row(contexts.at(s.n), s.k, form);
        for (const auto& [t, w] : row.targets) out.add(t, mass * w);
    }
    return out;
}

template <ProbabilityScalar S>
struct StepOptions {
    // Route uniform deletion through the full survivor+reassignment
    // rows instead of the closed uniform fragment (the two agree; the
    // fragment is cheaper).
    bool espr_rows_for_uniform = false;
    ReassignmentForm form = ReassignmentForm::Simplified;
};

template <ProbabilityScalar S>
struct StepResult {
    StateDistribution<S> next;
    S leaked{0}; // growth mass clamped at the size cap this step
};

/// One full evolution step of the state distribution: growth fragments
/// with weight p, decay rows with weight q, reflecting no-op at the
/// floor and the configured policy at the cap. Total mass is
/// preserved; the clamped growth mass is reported, not dropped.
template <ProbabilityScalar S>
StepResult<S> step_state_distribution(const StateDistribution<S>& sd,
                                      const EvolutionRule<S>& rule,
                                      const StepOptions<S>& opts = {}) {
    rule.validate();
    if (sd.empty()) throw std::invalid_argument("empty state distribution");
    if (sd.min_size() < rule.n_floor || sd.max_size() > rule.n_cap)
        throw std::invalid_argument("state distribution holds sizes outside [n_floor, n_cap]");

    const S p = rule.p;
    const S q = rule.q();
    const bool need_espr_rows =
        q != S(0) && (rule.del == DeletionRule::DegreeProportional || opts.espr_rows_for_uniform);
    const bool need_mean_degree = p != S(0) && rule.attach == AttachmentRule::PreferentialAttach;

    std::set<int> sizes;
    for (const auto& [s, mass] : sd.mass()) sizes.insert(s.n);

    std::map<int, DecayContext<S>> contexts;
    std::map<int, S> mean_degree;
    for (int n : sizes) {
        const auto cond = sd.conditional_at_size(n);
        if (!cond) continue;
        if (need_mean_degree) {
            S kbar(0);
            for (int k = 0; k < n; ++k) kbar += S(k) * (*cond)[k];
            mean_degree[n] = kbar;
        }
        if (need_espr_rows && n > rule.n_floor)
            contexts.emplace(n, decay_context_mean_field(*cond, n, rule.del));
    }

    StepResult<S> result;
    for (const auto& [s, mass] : sd.mass()) {
        if (p != S(0)) {
            if (s.n < rule.n_cap) {
                std::optional<S> kbar;
                if (need_mean_degree) kbar = mean_degree.at(s.n);
                for (const auto& [t, w] : growth_transitions(s, rule, kbar))
                    result.next.add(t, mass * w);
            } else if (rule.cap_policy == CapPolicy::ClampedGrowth) {
                std::optional<S> kbar;
                if (need_mean_degree) kbar = mean_degree.at(s.n);
                for (const auto& [t, w] : growth_transitions(s, rule, kbar))
                    result.next.add(NodeState{rule.n_cap, std::min(t.k, rule.n_cap - 1)},
                                    mass * w);
                result.leaked += p * mass;
            } else {
                result.next.add(s, p * mass);
                result.leaked += p * mass;
            }
        }
        if (q != S(0)) {
            if (s.n == rule.n_floor) {
                result.next.add(s, q * mass); // reflecting boundary
            } else if (!need_espr_rows) {
                for (const auto& [t, w] : uniform_deletion_transitions(s, q))
                    result.next.add(t, mass * w);
            } else {
                const auto row = decay_transition_row(contexts.at(s.n), s.k, opts.form);
                for (const auto& [t, w] : row.targets) result.next.add(t, mass * q * w);
            }
        }
    }
    return result;
}

struct SolverDiagnostics {
    long iterations = 0;
    double residual = 0.0;   // L1 change of the degree marginal, last step
    bool converged = false;
    double leaked_total = 0.0;
    double leaked_last_step = 0.0;
    double cap_mass = 0.0;   // stationary mass sitting at the size cap
    double floor_mass = 0.0;
};

template <ProbabilityScalar S>
struct SteadyStateResult {
    DegreeDistribution<S> degree_marginal;
    StateDistribution<S> state;
    SolverDiagnostics diagnostics;
};

/// Iterates the one-step update until the degree marginal stops moving
/// (L1 change below tol) or max_iters is exhausted. Non-convergence is
/// reported through the diagnostics, never as silent success.
template <ProbabilityScalar S>
SteadyStateResult<S> steady_state(const EvolutionRule<S>& rule, StateDistribution<S> init,
                                  double tol, long max_iters,
                                  const StepOptions<S>& opts = {}) {
    rule.validate();
    if (tol <= 0) throw std::invalid_argument("tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

    SteadyStateResult<S> out;
    auto marginal = init.degree_marginal();
    StateDistribution<S> sd = std::move(init);
    SolverDiagnostics diag;
    for (long it = 1; it <= max_iters; ++it) {
        auto step = step_state_distribution(sd, rule, opts);
        sd = std::move(step.next);
        diag.leaked_last_step = to_double<S>(step.leaked);
        diag.leaked_total += diag.leaked_last_step;
        auto next_marginal = sd.degree_marginal();
        diag.residual = to_double<S>(l1_distance(next_marginal, marginal));
        diag.iterations = it;
        marginal = std::move(next_marginal);
        if (diag.residual < tol) {
            diag.converged = true;
            break;
        }
    }
    diag.cap_mass = to_double<S>(sd.size_mass(rule.n_cap));
    diag.floor_mass = to_double<S>(sd.size_mass(rule.n_floor));
    out.degree_marginal = std::move(marginal);
    out.state = std::move(sd);
    out.diagnostics = diag;
    return out;
}

} // namespace espr

#endif // ESPR_KERNEL_HPP
