#ifndef ESPR_STATE_HPP
#define ESPR_STATE_HPP

#include <compare>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "espr/distribution.hpp"
#include "espr/graph.hpp"
#include "espr/scalar.hpp"

namespace espr {

/// A node's two-dimensional state: the size of the network it lives in
/// and its own degree.
struct NodeState {
    int n; // network size, >= 1
    int k; // degree, 0 <= k < n

    auto operator<=>(const NodeState&) const = default;
};

inline std::string to_string(const NodeState& s) {
    return "(" + std::to_string(s.n) + "," + std::to_string(s.k) + ")";
}

/// Probability mass over node states, kept in a sorted map so
/// iteration (and therefore every downstream reduction) is
/// deterministic.
template <ProbabilityScalar S>
class StateDistribution {
public:
    using Mass = std::map<NodeState, S>;

    StateDistribution() = default;

    static StateDistribution point_mass(NodeState s) {
        StateDistribution sd;
        sd.add(s, S(1));
        return sd;
    }

    /// All mass at the state of a node in a complete graph of size n.
    static StateDistribution complete_graph(int n) {
        return point_mass(NodeState{n, n - 1});
    }

    void add(NodeState s, const S& mass) {
        if (s.k < 0 || s.k >= s.n)
            throw std::invalid_argument("state " + to_string(s) + " has k >= n");
        if (mass == S(0)) return;
        mass_[s] += mass;
    }

    const Mass& mass() const { return mass_; }
    bool empty() const { return mass_.empty(); }

    S total() const {
        S acc(0);
        for (const auto& [s, m] : mass_) acc += m;
        return acc;
    }

    S at(NodeState s) const {
        auto it = mass_.find(s);
        return it == mass_.end() ? S(0) : it->second;
    }

    int min_size() const {
        if (mass_.empty()) throw std::logic_error("empty state distribution");
        return mass_.begin()->first.n;
    }
    int max_size() const {
        if (mass_.empty()) throw std::logic_error("empty state distribution");
        return mass_.rbegin()->first.n;
    }

    /// P(size = n).
    S size_mass(int n) const {
        S acc(0);
        for (auto it = mass_.lower_bound(NodeState{n, 0});
             it != mass_.end() && it->first.n == n; ++it)
            acc += it->second;
        return acc;
    }

    /// Degree distribution conditional on size n, as a length-n vector.
    /// Returns nullopt when no mass sits at size n.
    std::optional<DegreeDistribution<S>> conditional_at_size(int n) const {
        DegreeDistribution<S> cond = DegreeDistribution<S>::Constant(n, S(0));
        S total(0);
        for (auto it = mass_.lower_bound(NodeState{n, 0});
             it != mass_.end() && it->first.n == n; ++it) {
            cond[it->first.k] = it->second;
            total += it->second;
        }
        if (total == S(0)) return std::nullopt;
        for (int k = 0; k < n; ++k) cond[k] = cond[k] / total;
        return cond;
    }

    /// Marginal over degrees: P_k = sum_n P_(n,k).
    DegreeDistribution<S> degree_marginal() const {
        int len = 0;
        for (const auto& [s, m] : mass_) len = std::max(len, s.k + 1);
        DegreeDistribution<S> out = DegreeDistribution<S>::Constant(std::max(len, 1), S(0));
        for (const auto& [s, m] : mass_) out[s.k] += m;
        return out;
    }

private:
    Mass mass_;
};

/// Tabular "n k mass" serialization.
template <ProbabilityScalar S>
std::string format_state_distribution(const StateDistribution<S>& sd) {
    std::ostringstream out;
    for (const auto& [s, m] : sd.mass())
        out << s.n << " " << s.k << " " << format_scalar<S>(m) << "\n";
    return out.str();
}

template <ProbabilityScalar S>
StateDistribution<S> parse_state_distribution(std::istream& in) {
    StateDistribution<S> sd;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        int n, k;
        std::string mass;
        if (!(ls >> n)) continue;
        if (!(ls >> k >> mass))
            throw std::invalid_argument("state table line " + std::to_string(lineno) +
                                        ": expected 'n k mass'");
        sd.add(NodeState{n, k}, parse_scalar<S>(mass));
    }
    return sd;
}

enum class AttachmentRule {
    UniformAttach,
    PreferentialAttach,
};

inline std::string to_string(AttachmentRule rule) {
    return rule == AttachmentRule::UniformAttach ? "uniform" : "preferential";
}

/// What to do with growth when the chain sits at the size cap.
/// ClampedGrowth keeps the degree dynamics (gain / newcomer targets)
/// while pinning the size at the cap; SaturateNoOp freezes the state
/// for that step. Either way the spilled mass is tracked as leakage.
enum class CapPolicy {
    ClampedGrowth,
    SaturateNoOp,
};

/// The evolution rule: grow with probability p (a new node attaches to
/// m existing ones), otherwise delete a node under `del`. Sizes are
/// reflected at n_floor (a decay event there is a no-op) and truncated
/// at n_cap.
template <ProbabilityScalar S>
struct EvolutionRule {
    S p;
    int m = 1;
    AttachmentRule attach = AttachmentRule::UniformAttach;
    DeletionRule del = DeletionRule::Uniform;
    int n_floor = 2;
    int n_cap = 60;
    CapPolicy cap_policy = CapPolicy::ClampedGrowth;

    S q() const { return S(1) - p; }

    bool operator==(const EvolutionRule&) const = default;

    void validate() const {
        if (p < S(0) || p > S(1))
            throw std::invalid_argument("p must lie in [0,1]");
        if (m < 0) throw std::invalid_argument("m must be >= 0");
        if (n_floor < std::max(2, m + 1))
            throw std::invalid_argument("n_floor must be >= max(2, m+1)");
        if (n_floor > n_cap)
            throw std::invalid_argument("n_floor must not exceed n_cap");
    }
};

} // namespace espr

#endif // ESPR_STATE_HPP
