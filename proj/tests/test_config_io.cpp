#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "espr/config.hpp"
#include "espr/emit.hpp"
#include "espr/state.hpp"

using espr::Config;
using espr::ConfigError;
using espr::NodeState;
using espr::Rational;
using espr::StateDistribution;

namespace {

Config parse(const std::string& text) {
    std::istringstream in(text);
    return Config::parse(in);
}

} // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse("# comment\n[model]\np = 0.7\nm=2\n\n[solver]\ntol = 1e-10\n");
    CHECK(cfg.get_double("model", "p", 0) == 0.7);
    CHECK(cfg.get_long("model", "m", 0) == 2);
    CHECK(cfg.get_double("solver", "tol", 0) == 1e-10);
    CHECK(cfg.get_long("model", "n_cap", 60) == 60); // fallback
    CHECK_FALSE(cfg.has("simulation", "seed"));

    CHECK_THROWS_AS(parse("[model\np=1\n"), ConfigError);
    CHECK_THROWS_AS(parse("justtext\n"), ConfigError);
    CHECK_THROWS_AS(parse("= 3\n"), ConfigError);
}

TEST_CASE("typed getters name the offending field") {
    const auto cfg = parse("[model]\np = abc\nm = 1.5\n");
    try {
        cfg.get_double("model", "p", 0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("model.p") != std::string::npos);
    }
    try {
        cfg.get_long("model", "m", 0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("model.m") != std::string::npos);
    }
}

TEST_CASE("model building validates ranges") {
    CHECK_THROWS_AS(espr::model_from_config<double>(parse("[model]\np = 1.2\n")), ConfigError);
    CHECK_THROWS_AS(espr::model_from_config<double>(parse("[model]\nm = 5\nn_floor = 3\n")),
                    ConfigError);
    CHECK_THROWS_AS(
        espr::model_from_config<double>(parse("[model]\nn_floor = 70\nn_cap = 60\n")),
        ConfigError);
    const auto rule = espr::model_from_config<Rational>(parse("[model]\np = 0.7\nm = 2\n"));
    CHECK(rule.p == Rational(7, 10));
    CHECK(rule.m == 2);
    CHECK(rule.n_floor == 3); // default floor respects m+1
}

TEST_CASE("flag-style overrides win") {
    auto cfg = parse("[model]\np = 0.7\n");
    cfg.set("model", "p", "0.9");
    CHECK(cfg.get_double("model", "p", 0) == 0.9);
}

TEST_CASE("config hash is stable and order-insensitive") {
    auto a = parse("[model]\np = 0.7\nm = 2\n");
    auto b = parse("[model]\nm = 2\np = 0.7\n");
    CHECK(espr::config_hash(a.entries()) == espr::config_hash(b.entries()));
    b.set("model", "p", "0.8");
    CHECK(espr::config_hash(a.entries()) != espr::config_hash(b.entries()));
}

TEST_CASE("state distribution serialization round trip") {
    StateDistribution<Rational> sd;
    sd.add(NodeState{4, 1}, Rational(1, 4));
    sd.add(NodeState{4, 2}, Rational(1, 2));
    sd.add(NodeState{5, 0}, Rational(1, 4));
    const auto text = espr::format_state_distribution(sd);
    CHECK(text == "4 1 1/4\n4 2 1/2\n5 0 1/4\n");
    std::istringstream in(text);
    const auto parsed = espr::parse_state_distribution<Rational>(in);
    CHECK(parsed.mass() == sd.mass());

    CHECK_THROWS(StateDistribution<Rational>::point_mass(NodeState{3, 3}));
}

TEST_CASE("csv emission carries provenance and fixed formatting") {
    espr::DegreeDistribution<double> d(3);
    d << 0.125, 1.0 / 3, 13.0 / 24;
    const auto csv = espr::degree_table_csv(d, {{"model.p", "0"}, {"mode", "float"}});
    CHECK(csv.find("# espr 0.1.0") == 0);
    CHECK(csv.find("# config_hash=") != std::string::npos);
    CHECK(csv.find("k,P_k") != std::string::npos);
    CHECK(csv.find("0,0.125\n") != std::string::npos);
    CHECK(csv.find("0.33333333333333331") != std::string::npos); // 17 significant digits

    espr::DegreeDistribution<Rational> r(2);
    r << Rational(1, 8), Rational(7, 8);
    const auto exact_csv = espr::degree_table_csv(r, {});
    CHECK(exact_csv.find("0,1/8\n") != std::string::npos);
    CHECK(exact_csv.find("1,7/8\n") != std::string::npos);
}
