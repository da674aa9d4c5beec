#ifndef ESPR_CONFIG_HPP
#define ESPR_CONFIG_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "espr/state.hpp"

namespace espr {

/// Configuration problem with the offending field spelled out; the CLI
/// maps these to the validation-error exit code.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key-value configuration with [section] headers, '#' comments,
/// and "key = value" lines. Values are kept as strings; typed access
/// goes through the getters, which name the field on any failure.
class Config {
public:
    Config() = default;

    static Config parse(std::istream& in, const std::string& origin = "<config>") {
        Config cfg;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto text = trim(line);
            if (text.empty()) continue;
            if (text.front() == '[') {
                if (text.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno) +
                                      ": malformed section header");
                section = trim(text.substr(1, text.size() - 2));
                continue;
            }
            auto eq = text.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
            const auto key = trim(text.substr(0, eq));
            const auto value = trim(text.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            cfg.values_[qualify(section, key)] = value;
        }
        return cfg;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        return parse(in, path);
    }

    /// Later assignments win; used for flag overrides.
    void set(const std::string& section, const std::string& key, const std::string& value) {
        values_[qualify(section, key)] = value;
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(qualify(section, key)) > 0;
    }

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        auto it = values_.find(qualify(section, key));
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        auto v = get(section, key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const double d = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            return d;
        } catch (const std::exception&) {
            throw ConfigError("field " + qualify(section, key) + ": not a number: '" + *v + "'");
        }
    }

    long get_long(const std::string& section, const std::string& key, long fallback) const {
        auto v = get(section, key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            const long n = std::stol(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            return n;
        } catch (const std::exception&) {
            throw ConfigError("field " + qualify(section, key) + ": not an integer: '" + *v + "'");
        }
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        auto v = get(section, key);
        return v ? *v : fallback;
    }

    /// Canonical listing for provenance headers.
    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    static std::string qualify(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

inline DeletionRule parse_deletion_rule(const std::string& v, const std::string& field) {
    if (v == "uniform") return DeletionRule::Uniform;
    if (v == "preferential" || v == "degree" || v == "degree-proportional")
        return DeletionRule::DegreeProportional;
    throw ConfigError("field " + field + ": expected uniform|preferential, got '" + v + "'");
}

inline AttachmentRule parse_attachment_rule(const std::string& v, const std::string& field) {
    if (v == "uniform") return AttachmentRule::UniformAttach;
    if (v == "preferential") return AttachmentRule::PreferentialAttach;
    throw ConfigError("field " + field + ": expected uniform|preferential, got '" + v + "'");
}

/// Builds the evolution rule from the [model] section, surfacing range
/// violations as ConfigErrors that name the field.
template <ProbabilityScalar S>
EvolutionRule<S> model_from_config(const Config& cfg) {
    EvolutionRule<S> rule;
    const auto p_text = cfg.get_string("model", "p", "0.7");
    try {
        rule.p = parse_scalar<S>(p_text);
    } catch (const std::exception&) {
        throw ConfigError("field model.p: not a number: '" + p_text + "'");
    }
    rule.m = static_cast<int>(cfg.get_long("model", "m", 1));
    rule.attach = parse_attachment_rule(cfg.get_string("model", "attach", "uniform"),
                                        "model.attach");
    rule.del = parse_deletion_rule(cfg.get_string("model", "delete", "uniform"),
                                   "model.delete");
    // an explicit floor is validated as given; the default adapts to m
    const long floor_default = std::max<long>(2, rule.m + 1);
    rule.n_floor = static_cast<int>(cfg.get_long("model", "n_floor", floor_default));
    rule.n_cap = static_cast<int>(cfg.get_long("model", "n_cap", 60));
    try {
        rule.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field model: ") + e.what());
    }
    return rule;
}

} // namespace espr

#endif // ESPR_CONFIG_HPP
