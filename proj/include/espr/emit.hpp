#ifndef ESPR_EMIT_HPP
#define ESPR_EMIT_HPP

#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "espr/kernel.hpp"
#include "espr/montecarlo.hpp"
#include "espr/verify.hpp"

namespace espr {

inline constexpr const char* kToolVersion = "espr 0.1.0";

/// FNV-1a over the canonical "key=value" listing; stable across runs,
/// so identical configurations hash identically.
inline std::string config_hash(const std::map<std::string, std::string>& kv) {
    std::uint64_t h = 1469598103934665603ULL;
    auto eat = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [k, v] : kv) {
        eat(k);
        eat("=");
        eat(v);
        eat("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Comment-style provenance header carried by every emitted table.
inline std::string provenance_header(const std::map<std::string, std::string>& kv) {
    std::ostringstream out;
    out << "# " << kToolVersion << "\n";
    out << "# config_hash=" << config_hash(kv) << "\n";
    for (const auto& [k, v] : kv) out << "# " << k << "=" << v << "\n";
    return out.str();
}

template <ProbabilityScalar S>
std::string degree_table_csv(const DegreeDistribution<S>& d,
                             const std::map<std::string, std::string>& kv) {
    std::ostringstream out;
    out << provenance_header(kv);
    out << "k,P_k\n";
    for (Eigen::Index k = 0; k < d.size(); ++k)
        out << k << "," << format_scalar<S>(d[k]) << "\n";
    return out.str();
}

inline std::string empirical_table_csv(const EmpiricalDistribution& e,
                                       const std::map<std::string, std::string>& kv) {
    std::ostringstream out;
    out << provenance_header(kv);
    out << "k,P_k,std_error\n";
    for (Eigen::Index k = 0; k < e.probs.size(); ++k)
        out << k << "," << format_double(e.probs[k]) << "," << format_double(e.std_error[k])
            << "\n";
    return out.str();
}

template <ProbabilityScalar S>
nlohmann::json degree_table_json(const DegreeDistribution<S>& d,
                                 const std::map<std::string, std::string>& kv) {
    nlohmann::json j;
    j["tool"] = kToolVersion;
    j["config_hash"] = config_hash(kv);
    j["config"] = kv;
    auto& arr = j["P_k"] = nlohmann::json::array();
    for (Eigen::Index k = 0; k < d.size(); ++k) arr.push_back(format_scalar<S>(d[k]));
    return j;
}

inline nlohmann::json to_json(const SolverDiagnostics& d) {
    return {{"iterations", d.iterations},
            {"residual", d.residual},
            {"converged", d.converged},
            {"leaked_total", d.leaked_total},
            {"leaked_last_step", d.leaked_last_step},
            {"cap_mass", d.cap_mass},
            {"floor_mass", d.floor_mass}};
}

inline nlohmann::json to_json(const Theorem1Report& r) {
    nlohmann::json j;
    j["check"] = "theorem1";
    j["rule"] = to_string(r.rule);
    j["nodes"] = r.nodes;
    j["exact_mode"] = r.exact_mode;
    j["enumeration_average"] = r.er_side;
    j["kernel_marginal"] = r.espr_side;
    j["max_abs_diff"] = r.max_abs_diff;
    j["exact_equal"] = r.exact_equal;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    auto& outs = j["outcomes"] = nlohmann::json::array();
    for (const auto& o : r.outcomes)
        outs.push_back({{"weight", o.weight},
                        {"surviving_nodes", o.labels},
                        {"state_distribution", o.state_distribution}});
    return j;
}

inline std::string render_text(const Theorem1Report& r) {
    std::ostringstream out;
    out << "one-step enumeration equivalence (theorem1), rule=" << to_string(r.rule)
        << ", n=" << r.nodes << (r.exact_mode ? ", exact arithmetic" : "") << "\n";
    out << "  per-victim outcomes (weight | surviving nodes | state distribution):\n";
    for (const auto& o : r.outcomes) {
        out << "    " << o.weight << " | {";
        for (std::size_t i = 0; i < o.labels.size(); ++i)
            out << (i ? "," : "") << o.labels[i];
        out << "} | (";
        for (std::size_t i = 0; i < o.state_distribution.size(); ++i)
            out << (i ? ", " : "") << o.state_distribution[i];
        out << ")\n";
    }
    auto vec = [](const std::vector<std::string>& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
        return s + ")";
    };
    out << "  enumeration average: " << vec(r.er_side) << "\n";
    out << "  kernel marginal:     " << vec(r.espr_side) << "\n";
    if (r.exact_mode)
        out << "  exact_equal=" << (r.exact_equal ? "yes" : "no") << "\n";
    else
        out << "  max_abs_diff=" << format_double(r.max_abs_diff) << " tol="
            << format_double(r.tolerance) << "\n";
    out << "  " << (r.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

inline nlohmann::json to_json(const Theorem2Report& r) {
    return {{"check", "theorem2"},
            {"n_max", r.n_max},
            {"cases_checked", r.checked},
            {"all_equal", r.all_equal},
            {"failures", r.failures}};
}

inline std::string render_text(const Theorem2Report& r) {
    std::ostringstream out;
    out << "uniform-deletion reduction identity (theorem2), n up to " << r.n_max << "\n";
    out << "  cases checked: " << r.checked << " (exact rational comparison)\n";
    for (const auto& f : r.failures) out << "  mismatch: " << f << "\n";
    out << "  " << (r.all_equal ? "PASS" : "FAIL") << "\n";
    return out.str();
}

inline nlohmann::json to_json(const CompareReport& r) {
    nlohmann::json j;
    j["check"] = "compare";
    j["tv"] = r.tv;
    j["tv_threshold"] = r.tv_threshold;
    j["threshold_enforced"] = r.threshold_enforced;
    j["mc_snapshots"] = r.mc_snapshots;
    j["solver"] = to_json(r.solver);
    j["pass"] = r.pass;
    auto dump = [](const Eigen::VectorXd& v) {
        nlohmann::json a = nlohmann::json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
        return a;
    };
    j["kernel_marginal"] = dump(r.kernel_marginal);
    j["mc_probs"] = dump(r.mc_probs);
    j["mc_std_error"] = dump(r.mc_std_error);
    j["z_scores"] = r.z_scores;
    return j;
}

inline std::string render_text(const CompareReport& r) {
    std::ostringstream out;
    out << "kernel vs Monte Carlo degree marginals\n";
    out << "  solver: iterations=" << r.solver.iterations
        << " residual=" << format_double(r.solver.residual)
        << " converged=" << (r.solver.converged ? "yes" : "no")
        << " cap_mass=" << format_double(r.solver.cap_mass) << "\n";
    out << "  mc snapshots: " << r.mc_snapshots << "\n";
    const Eigen::Index len = std::max(r.kernel_marginal.size(), r.mc_probs.size());
    out << "  k  kernel  mc  stderr  z\n";
    for (Eigen::Index k = 0; k < len; ++k) {
        const double a = k < r.kernel_marginal.size() ? r.kernel_marginal[k] : 0.0;
        const double b = k < r.mc_probs.size() ? r.mc_probs[k] : 0.0;
        const double se = k < r.mc_std_error.size() ? r.mc_std_error[k] : 0.0;
        if (a < 1e-12 && b < 1e-12) continue;
        out << "  " << k << "  " << format_double(a) << "  " << format_double(b) << "  "
            << format_double(se) << "  " << format_double(r.z_scores[static_cast<std::size_t>(k)])
            << "\n";
    }
    out << "  TV=" << format_double(r.tv);
    if (r.threshold_enforced) out << " threshold=" << format_double(r.tv_threshold);
    else out << " (informational, no threshold)";
    out << "\n  " << (r.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

} // namespace espr

#endif // ESPR_EMIT_HPP
