#ifndef ESPR_GRAPH_HPP
#define ESPR_GRAPH_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "espr/scalar.hpp"

namespace espr {

/// How the victim of a deletion event is chosen.
enum class DeletionRule {
    Uniform,            // q_v = 1/n
    DegreeProportional, // q_v = k_v / sum_w k_w
};

inline std::string to_string(DeletionRule rule) {
    return rule == DeletionRule::Uniform ? "uniform" : "preferential";
}

/// Small undirected simple graph over opaque integer labels.
///
/// Immutable after construction; node labels are kept sorted and edges
/// are kept as sorted (min,max) pairs, so equality and ordering are
/// structural. Degree, not label, carries all the semantics here.
class Graph {
public:
    using Edge = std::pair<int, int>;

    Graph(std::vector<int> labels, std::vector<Edge> edges) {
        std::sort(labels.begin(), labels.end());
        if (labels.empty()) throw std::invalid_argument("graph needs at least one node");
        if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
            throw std::invalid_argument("duplicate node label");
        for (auto& e : edges) {
            if (e.first == e.second)
                throw std::invalid_argument("self-loop at node " + std::to_string(e.first));
            if (e.first > e.second) std::swap(e.first, e.second);
            if (!std::binary_search(labels.begin(), labels.end(), e.first) ||
                !std::binary_search(labels.begin(), labels.end(), e.second))
                throw std::invalid_argument("edge endpoint is not a declared node");
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw std::invalid_argument("duplicate edge");
        labels_ = std::move(labels);
        edges_ = std::move(edges);
    }

    static Graph complete(int n, int first_label = 1) {
        std::vector<int> labels;
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) labels.push_back(first_label + i);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                edges.emplace_back(first_label + i, first_label + j);
        return Graph(std::move(labels), std::move(edges));
    }

    static Graph edgeless(int n, int first_label = 1) {
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) labels.push_back(first_label + i);
        return Graph(std::move(labels), {});
    }

    int node_count() const { return static_cast<int>(labels_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<int>& labels() const { return labels_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool contains(int v) const {
        return std::binary_search(labels_.begin(), labels_.end(), v);
    }

    int degree(int v) const {
        require_node(v);
        int d = 0;
        for (const auto& e : edges_)
            if (e.first == v || e.second == v) ++d;
        return d;
    }

    std::vector<int> neighbors(int v) const {
        require_node(v);
        std::vector<int> out;
        for (const auto& e : edges_) {
            if (e.first == v) out.push_back(e.second);
            else if (e.second == v) out.push_back(e.first);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Number of nodes per degree, indexed 0..n-1.
    std::vector<int> degree_census() const {
        std::vector<int> census(labels_.size(), 0);
        std::vector<int> deg(labels_.size(), 0);
        for (const auto& e : edges_) {
            ++deg[index_of(e.first)];
            ++deg[index_of(e.second)];
        }
        for (int d : deg) ++census[d];
        return census;
    }

    int total_degree() const { return 2 * edge_count(); }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.labels_ == b.labels_ && a.edges_ == b.edges_;
    }
    friend bool operator<(const Graph& a, const Graph& b) {
        if (a.labels_ != b.labels_) return a.labels_ < b.labels_;
        return a.edges_ < b.edges_;
    }

private:
    void require_node(int v) const {
        if (!contains(v))
            throw std::out_of_range("unknown node label " + std::to_string(v));
    }

    int index_of(int v) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), v);
        return static_cast<int>(it - labels_.begin());
    }

    std::vector<int> labels_;
    std::vector<Edge> edges_;
};

/// Probability vector over degrees 0..k_max.
template <ProbabilityScalar S>
using DegreeDistribution = Eigen::Vector<S, Eigen::Dynamic>;

/// Fraction of nodes at each degree (Eigen vector of length n).
template <ProbabilityScalar S>
DegreeDistribution<S> degree_distribution(const Graph& g) {
    const auto census = g.degree_census();
    const int n = g.node_count();
    DegreeDistribution<S> probs(n);
    for (int k = 0; k < n; ++k) probs[k] = ratio<S>(census[k], n);
    return probs;
}

/// Per-node removal probabilities. Degree-proportional selection on an
/// edgeless graph is a 0/0; it falls back to the uniform rule and says
/// so via `uniform_fallback`.
template <ProbabilityScalar S>
struct DeletionProbabilities {
    std::map<int, S> by_node;
    bool uniform_fallback = false;

    const S& at(int v) const { return by_node.at(v); }
};

template <ProbabilityScalar S>
DeletionProbabilities<S> deletion_probabilities(const Graph& g, DeletionRule rule) {
    DeletionProbabilities<S> out;
    const int n = g.node_count();
    if (rule == DeletionRule::DegreeProportional && g.edge_count() > 0) {
        const int total = g.total_degree();
        for (int v : g.labels()) out.by_node[v] = ratio<S>(g.degree(v), total);
    } else {
        out.uniform_fallback = rule == DeletionRule::DegreeProportional;
        for (int v : g.labels()) out.by_node[v] = ratio<S>(1, n);
    }
    return out;
}

/// Copy of g with v and its incident edges removed.
inline Graph delete_node(const Graph& g, int v) {
    if (!g.contains(v))
        throw std::out_of_range("unknown node label " + std::to_string(v));
    if (g.node_count() == 1)
        throw std::invalid_argument("cannot delete the last node");
    std::vector<int> labels;
    for (int u : g.labels())
        if (u != v) labels.push_back(u);
    std::vector<Graph::Edge> edges;
    for (const auto& e : g.edges())
        if (e.first != v && e.second != v) edges.push_back(e);
    return Graph(std::move(labels), std::move(edges));
}

} // namespace espr

#endif // ESPR_GRAPH_HPP
