#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "espr/ensemble.hpp"
#include "espr/montecarlo.hpp"
#include "test_util.hpp"

using espr::AttachmentRule;
using espr::DeletionRule;
using espr::EvolutionRule;
using espr::Graph;
using espr::SimConfig;
using espr::testing::paw_graph;

namespace {

SimConfig base_config() {
    SimConfig cfg;
    cfg.rule = EvolutionRule<double>{};
    cfg.rule.p = 0.5;
    cfg.rule.m = 1;
    cfg.rule.n_floor = 2;
    cfg.rule.n_cap = 60;
    return cfg;
}

} // namespace

TEST_CASE("config validation") {
    auto cfg = base_config();
    cfg.trials = 0;
    CHECK_THROWS(cfg.validate());
    cfg = base_config();
    cfg.burn_in = 11;
    cfg.t_max = 10;
    CHECK_THROWS(cfg.validate());
    cfg = base_config();
    cfg.initial_graph = Graph::edgeless(1);
    CHECK_THROWS(cfg.validate());
    cfg = base_config();
    cfg.t_max = 0;
    cfg.burn_in = 0;
    CHECK_NOTHROW(cfg.validate()); // a zero-step run samples the initial graph
}

TEST_CASE("evolving graph mechanics") {
    espr::EvolvingGraph g(paw_graph());
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 4);
    CHECK(g.total_degree() == 8);

    g.add_node({0, 1});
    CHECK(g.node_count() == 5);
    CHECK(g.edge_count() == 6);
    CHECK(g.degree(4) == 2);

    const long degree_before = g.total_degree();
    const int deg1 = g.degree(1);
    g.delete_node(1);
    CHECK(g.node_count() == 4);
    CHECK(g.total_degree() == degree_before - 2 * deg1);

    // snapshot keeps real labels and stays a valid simple graph
    const Graph snap = g.snapshot();
    CHECK(snap.node_count() == 4);
    CHECK(snap.total_degree() == g.total_degree());
}

TEST_CASE("pure growth from a 2-clique builds a tree") {
    auto cfg = base_config();
    cfg.rule.p = 1.0;
    cfg.t_max = 10;
    cfg.burn_in = 10;
    const auto trial = espr::run_trial(cfg, 0);
    CHECK(trial.final_nodes == 12);
    CHECK(trial.final_edges == 11);
}

TEST_CASE("pure decay from a complete graph stays complete down to the floor") {
    auto cfg = base_config();
    cfg.rule.p = 0.0;
    cfg.t_max = 3;
    cfg.burn_in = 3;
    cfg.initial_graph = Graph::complete(5);
    const auto trial = espr::run_trial(cfg, 7);
    CHECK(trial.final_nodes == 2);
    CHECK(trial.final_edges == 1);

    // boundary no-op: extra steps change nothing
    cfg.t_max = 20;
    cfg.burn_in = 20;
    const auto longer = espr::run_trial(cfg, 7);
    CHECK(longer.final_nodes == 2);
    CHECK(longer.final_edges == 1);
}

TEST_CASE("zero-step run reports the initial distribution exactly") {
    auto cfg = base_config();
    cfg.rule.n_floor = 4;
    cfg.t_max = 0;
    cfg.burn_in = 0;
    cfg.trials = 1;
    const auto emp = espr::empirical_degree_distribution(cfg);
    REQUIRE(emp.probs.size() == 4);
    CHECK(emp.probs[3] == 1.0); // complete graph on 4 nodes
    CHECK(emp.snapshots == 1);
    CHECK(emp.std_error[3] == 0.0);
}

TEST_CASE("one-step deletion frequencies match the exact q-vector") {
    auto cfg = base_config();
    cfg.rule.p = 0.0;
    cfg.rule.del = DeletionRule::DegreeProportional;
    cfg.t_max = 1;
    cfg.burn_in = 1;
    cfg.initial_graph = paw_graph();
    cfg.debug_snapshots = true;
    cfg.seed = 11;

    const long trials = 100000;
    std::map<std::set<int>, long> victims;
    for (long t = 0; t < trials; ++t) {
        const auto trial = espr::run_trial(cfg, t);
        REQUIRE(trial.debug_snapshots.size() == 1);
        const auto& labels = trial.debug_snapshots[0].labels();
        victims[std::set<int>(labels.begin(), labels.end())]++;
    }
    auto freq = [&](std::set<int> s) {
        return static_cast<double>(victims[s]) / static_cast<double>(trials);
    };
    CHECK(freq({2, 3, 4}) == doctest::Approx(1.0 / 8).epsilon(0.08));
    CHECK(freq({1, 3, 4}) == doctest::Approx(3.0 / 8).epsilon(0.05));
    CHECK(freq({1, 2, 4}) == doctest::Approx(2.0 / 8).epsilon(0.06));
    CHECK(freq({1, 2, 3}) == doctest::Approx(2.0 / 8).epsilon(0.06));
}

TEST_CASE("degree-proportional sampling never picks an isolated node") {
    // star plus an isolated node: the isolated one has q = 0
    const Graph star = espr::parse_edge_list("1 2\n1 3\n1 4\nnode 9\n");
    espr::EvolvingGraph g(star);
    espr::rng::Stream rs(3, 0);
    for (int i = 0; i < 2000; ++i) {
        const int victim = espr::sample_deletion_victim(g, DeletionRule::DegreeProportional, rs);
        CHECK(g.degree(victim) > 0);
    }
}

TEST_CASE("attachment targets are distinct and complete") {
    espr::EvolvingGraph g(Graph::complete(6));
    espr::rng::Stream rs(5, 1);
    for (int i = 0; i < 500; ++i) {
        for (auto attach : {AttachmentRule::UniformAttach, AttachmentRule::PreferentialAttach}) {
            const auto targets = espr::sample_attachment_targets(g, 3, attach, rs);
            REQUIRE(targets.size() == 3);
            std::set<int> s(targets.begin(), targets.end());
            CHECK(s.size() == 3);
            for (int t : targets) CHECK(t < g.node_count());
        }
    }
    // edgeless fallback still yields distinct targets
    espr::EvolvingGraph empty(Graph::edgeless(5));
    const auto targets =
        espr::sample_attachment_targets(empty, 2, AttachmentRule::PreferentialAttach, rs);
    CHECK(std::set<int>(targets.begin(), targets.end()).size() == 2);
}

TEST_CASE("handshake parity holds along a trajectory") {
    auto cfg = base_config();
    cfg.rule.p = 0.6;
    cfg.rule.m = 2;
    cfg.rule.n_floor = 3;
    cfg.t_max = 300;
    cfg.burn_in = 0;
    cfg.debug_snapshots = true;
    const auto trial = espr::run_trial(cfg, 2);
    for (const auto& snap : trial.debug_snapshots) {
        long sum = 0;
        const auto census = snap.degree_census();
        for (std::size_t k = 0; k < census.size(); ++k) sum += static_cast<long>(k) * census[k];
        CHECK(sum % 2 == 0);
    }
}

TEST_CASE("results are reproducible and independent of worker count") {
    auto cfg = base_config();
    cfg.rule.p = 0.55;
    cfg.rule.del = DeletionRule::DegreeProportional;
    cfg.t_max = 200;
    cfg.trials = 96;
    cfg.seed = 42;

    const auto one = espr::empirical_degree_distribution(cfg, 1);
    const auto two = espr::empirical_degree_distribution(cfg, 2);
    const auto four = espr::empirical_degree_distribution(cfg, 4);
    REQUIRE(one.probs.size() == two.probs.size());
    REQUIRE(one.probs.size() == four.probs.size());
    for (Eigen::Index k = 0; k < one.probs.size(); ++k) {
        CHECK(one.probs[k] == two.probs[k]);   // bitwise
        CHECK(one.probs[k] == four.probs[k]);
        CHECK(one.std_error[k] == four.std_error[k]);
    }
    const auto again = espr::empirical_degree_distribution(cfg, 3);
    CHECK(again.snapshots == one.snapshots);
    for (Eigen::Index k = 0; k < one.probs.size(); ++k) CHECK(again.probs[k] == one.probs[k]);
}

TEST_CASE("size cap mode holds the network at the cap") {
    auto cfg = base_config();
    cfg.rule.p = 1.0;
    cfg.rule.n_cap = 6;
    cfg.cap_sizes = true;
    cfg.t_max = 50;
    cfg.burn_in = 50;
    const auto trial = espr::run_trial(cfg, 0);
    CHECK(trial.final_nodes == 6);
}
