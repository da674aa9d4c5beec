#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "espr/distribution.hpp"
#include "espr/graph.hpp"
#include "espr/graph_io.hpp"
#include "test_util.hpp"

using espr::DeletionRule;
using espr::Graph;
using espr::Rational;
using espr::testing::paw_graph;
using espr::testing::path3;

TEST_CASE("graph construction enforces the invariants") {
    CHECK_THROWS(Graph({}, {}));
    CHECK_THROWS(Graph({1, 1}, {}));
    CHECK_THROWS(Graph({1, 2}, {{1, 1}}));
    CHECK_THROWS(Graph({1, 2}, {{1, 2}, {2, 1}})); // duplicate in either order
    CHECK_THROWS(Graph({1, 2}, {{1, 3}}));
    const Graph g({2, 1, 3}, {{3, 1}});
    CHECK(g.labels() == std::vector<int>{1, 2, 3});
    CHECK(g.edges() == std::vector<Graph::Edge>{{1, 3}});
}

TEST_CASE("degree bookkeeping") {
    const Graph g = paw_graph();
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 4);
    CHECK(g.degree(1) == 1);
    CHECK(g.degree(2) == 3);
    CHECK(g.degree(3) == 2);
    CHECK(g.degree(4) == 2);
    CHECK(g.neighbors(2) == std::vector<int>{1, 3, 4});
    CHECK(g.total_degree() == 8);
    CHECK(g.degree_census() == std::vector<int>{0, 1, 2, 1});
}

TEST_CASE("degree distribution of the sample graphs") {
    const auto d = espr::degree_distribution<Rational>(paw_graph());
    REQUIRE(d.size() == 4);
    CHECK(d[0] == Rational(0));
    CHECK(d[1] == Rational(1, 4));
    CHECK(d[2] == Rational(1, 2));
    CHECK(d[3] == Rational(1, 4));

    const auto triangle = espr::degree_distribution<Rational>(Graph::complete(3));
    CHECK(triangle[0] == Rational(0));
    CHECK(triangle[1] == Rational(0));
    CHECK(triangle[2] == Rational(1));

    const auto isolated = espr::degree_distribution<Rational>(Graph::edgeless(3));
    CHECK(isolated[0] == Rational(1));
    CHECK(isolated[1] == Rational(0));
    CHECK(isolated[2] == Rational(0));

    CHECK(espr::is_probability_vector(espr::degree_distribution<double>(paw_graph())));
}

TEST_CASE("deletion probabilities, degree proportional") {
    const auto q = espr::deletion_probabilities<Rational>(paw_graph(),
                                                          DeletionRule::DegreeProportional);
    CHECK_FALSE(q.uniform_fallback);
    CHECK(q.at(1) == Rational(1, 8));
    CHECK(q.at(2) == Rational(3, 8));
    CHECK(q.at(3) == Rational(2, 8));
    CHECK(q.at(4) == Rational(2, 8));
}

TEST_CASE("deletion probabilities, uniform") {
    const auto q = espr::deletion_probabilities<Rational>(Graph::edgeless(5),
                                                          DeletionRule::Uniform);
    CHECK_FALSE(q.uniform_fallback);
    for (int v = 1; v <= 5; ++v) CHECK(q.at(v) == Rational(1, 5));
}

TEST_CASE("degenerate degree-proportional input falls back to uniform") {
    const auto q = espr::deletion_probabilities<Rational>(Graph::edgeless(3),
                                                          DeletionRule::DegreeProportional);
    CHECK(q.uniform_fallback);
    for (int v = 1; v <= 3; ++v) CHECK(q.at(v) == Rational(1, 3));
}

TEST_CASE("deletion probability properties over a small sweep") {
    // every labeled graph on 4 nodes
    const std::vector<Graph::Edge> all_edges = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
    for (unsigned mask = 0; mask < (1u << 6); ++mask) {
        std::vector<Graph::Edge> edges;
        for (int b = 0; b < 6; ++b)
            if (mask & (1u << b)) edges.push_back(all_edges[b]);
        const Graph g({1, 2, 3, 4}, edges);
        for (auto rule : {DeletionRule::Uniform, DeletionRule::DegreeProportional}) {
            const auto q = espr::deletion_probabilities<Rational>(g, rule);
            Rational sum(0);
            for (const auto& [v, qv] : q.by_node) sum += qv;
            CHECK(sum == Rational(1));
            if (rule == DeletionRule::Uniform)
                for (const auto& [v, qv] : q.by_node) CHECK(qv == Rational(1, 4));
            if (rule == DeletionRule::DegreeProportional && g.edge_count() > 0)
                for (const auto& [v, qv] : q.by_node)
                    if (g.degree(v) == 0) CHECK(qv == Rational(0));
        }
    }
}

TEST_CASE("delete_node") {
    const Graph g = paw_graph();
    const Graph without2 = espr::delete_node(g, 2);
    CHECK(without2.labels() == std::vector<int>{1, 3, 4});
    CHECK(without2.edges() == std::vector<Graph::Edge>{{3, 4}});
    CHECK(without2.degree_census() == std::vector<int>{1, 2, 0});

    const Graph k3 = espr::delete_node(Graph::complete(4), 3);
    CHECK(k3.node_count() == 3);
    CHECK(k3.edge_count() == 3);
    for (int v : k3.labels()) CHECK(k3.degree(v) == 2);

    const Graph split = espr::delete_node(path3(), 2);
    CHECK(split.edge_count() == 0);
    CHECK(split.node_count() == 2);

    CHECK_THROWS_AS(espr::delete_node(g, 9), std::out_of_range);
    CHECK_THROWS(espr::delete_node(Graph::edgeless(1), 1));

    // node and edge counts drop by exactly 1 and degree(v)
    for (int v : g.labels()) {
        const Graph h = espr::delete_node(g, v);
        CHECK(h.node_count() == g.node_count() - 1);
        CHECK(h.edge_count() == g.edge_count() - g.degree(v));
    }
    CHECK(g.node_count() == 4); // inputs untouched
}

TEST_CASE("edge list round trip") {
    const std::string text = "1 2\n2 3\n2 4\n3 4\nnode 9\n";
    const Graph g = espr::parse_edge_list(text);
    CHECK(g.node_count() == 5);
    CHECK(g.degree(9) == 0);
    CHECK(espr::format_edge_list(g) == text);
}

TEST_CASE("edge list parser rejects malformed input") {
    CHECK_THROWS(espr::parse_edge_list("1 1\n"));
    CHECK_THROWS(espr::parse_edge_list("1 2\n2 1\n"));
    CHECK_THROWS(espr::parse_edge_list("1 2\n1 2\n"));
    CHECK_THROWS(espr::parse_edge_list("1\n"));
    CHECK_THROWS(espr::parse_edge_list("a b\n"));
    CHECK_THROWS(espr::parse_edge_list("1x 2\n"));
    CHECK_THROWS(espr::parse_edge_list("node 3y\n"));
    CHECK_THROWS(espr::parse_edge_list("1 2 3\n"));
    CHECK_THROWS(espr::parse_edge_list(""));
    CHECK_NOTHROW(espr::parse_edge_list("# comment\n1 2\n\nnode 3\n"));
}
