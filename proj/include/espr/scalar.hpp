#ifndef ESPR_SCALAR_HPP
#define ESPR_SCALAR_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <type_traits>

#include "espr/rational.hpp"

namespace espr {

/// The two arithmetic backends: double for solver-scale work, Rational
/// for exact small-system checks. Core operations are templated on the
/// scalar and behave identically up to rounding.
template <class S>
concept ProbabilityScalar = std::is_same_v<S, double> || std::is_same_v<S, Rational>;

template <ProbabilityScalar S>
inline S ratio(long long num, long long den) {
    if constexpr (std::is_same_v<S, Rational>) {
        return Rational(num, den);
    } else {
        return static_cast<double>(num) / static_cast<double>(den);
    }
}

template <ProbabilityScalar S>
inline double to_double(const S& x) {
    if constexpr (std::is_same_v<S, Rational>) {
        return x.to_double();
    } else {
        return x;
    }
}

template <ProbabilityScalar S>
inline S abs_value(const S& x) {
    if constexpr (std::is_same_v<S, Rational>) {
        return espr::abs(x);
    } else {
        return std::fabs(x);
    }
}

template <ProbabilityScalar S>
inline S parse_scalar(const std::string& text) {
    if constexpr (std::is_same_v<S, Rational>) {
        return Rational::parse(text);
    } else {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("malformed number: " + text);
        return v;
    }
}

/// Fixed 17-significant-digit rendering so emitted tables are
/// byte-stable across runs.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <ProbabilityScalar S>
inline std::string format_scalar(const S& x) {
    if constexpr (std::is_same_v<S, Rational>) {
        return x.str();
    } else {
        return format_double(x);
    }
}

/// Exact-mode comparisons collapse to equality; float mode uses an
/// absolute tolerance.
template <ProbabilityScalar S>
inline bool within(const S& a, const S& b, double tol) {
    if constexpr (std::is_same_v<S, Rational>) {
        return a == b;
    } else {
        return std::fabs(a - b) <= tol;
    }
}

} // namespace espr

#endif // ESPR_SCALAR_HPP
