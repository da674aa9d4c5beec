#ifndef ESPR_RATIONAL_HPP
#define ESPR_RATIONAL_HPP

#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace espr {

namespace detail {

using int128 = __int128;

inline int128 checked_add(int128 a, int128 b) {
    int128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("rational arithmetic overflow (add)");
    return r;
}

inline int128 checked_sub(int128 a, int128 b) {
    int128 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw std::overflow_error("rational arithmetic overflow (sub)");
    return r;
}

inline int128 checked_mul(int128 a, int128 b) {
    int128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("rational arithmetic overflow (mul)");
    return r;
}

inline int128 abs128(int128 a) { return a < 0 ? -a : a; }

inline int128 gcd128(int128 a, int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::string int128_to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    std::string digits;
    while (u != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) digits.push_back('-');
    return std::string(digits.rbegin(), digits.rend());
}

} // namespace detail

/// Exact rational number on a 128-bit numerator/denominator.
///
/// Always stored normalized: gcd(num, den) == 1 and den > 0. Every
/// operation checks for 128-bit overflow and throws std::overflow_error
/// instead of wrapping. Range is ample for the exact-mode computations
/// this library performs (small-graph enumeration, kernel rows,
/// coefficient sweeps); it is not a general big-number type.
class Rational {
public:
    using int_t = detail::int128;

    Rational() : num_(0), den_(1) {}
    Rational(long long value) : num_(value), den_(1) {} // NOLINT(google-explicit-constructor)
    Rational(int value) : num_(value), den_(1) {}       // NOLINT(google-explicit-constructor)

    Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

    static Rational from_parts(int_t num, int_t den) {
        Rational r;
        r.num_ = num;
        r.den_ = den;
        r.normalize();
        return r;
    }

    int_t num() const { return num_; }
    int_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    explicit operator double() const { return to_double(); }

    double to_double() const {
        return static_cast<double>(static_cast<long double>(num_) /
                                   static_cast<long double>(den_));
    }

    Rational operator-() const { return from_parts(-num_, den_); }

    Rational& operator+=(const Rational& o) {
        using namespace detail;
        int_t n = checked_add(checked_mul(num_, o.den_), checked_mul(o.num_, den_));
        int_t d = checked_mul(den_, o.den_);
        num_ = n;
        den_ = d;
        normalize();
        return *this;
    }

    Rational& operator-=(const Rational& o) { return *this += (-o); }

    Rational& operator*=(const Rational& o) {
        using namespace detail;
        // Cross-reduce before multiplying to keep intermediates small.
        int_t g1 = gcd128(num_, o.den_);
        int_t g2 = gcd128(o.num_, den_);
        int_t n1 = g1 == 0 ? num_ : num_ / g1;
        int_t d2 = g1 == 0 ? o.den_ : o.den_ / g1;
        int_t n2 = g2 == 0 ? o.num_ : o.num_ / g2;
        int_t d1 = g2 == 0 ? den_ : den_ / g2;
        num_ = checked_mul(n1, n2);
        den_ = checked_mul(d1, d2);
        normalize();
        return *this;
    }

    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        return *this *= from_parts(o.den_, o.num_);
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        using namespace detail;
        return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// Renders as "num/den", or just "num" when the value is integral.
    std::string str() const {
        std::string s = detail::int128_to_string(num_);
        if (den_ != 1) s += "/" + detail::int128_to_string(den_);
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.str();
    }

    /// Parses "a", "a/b", or a decimal literal like "0.25" / "1e-3" /
    /// "2.5e2" exactly. Throws std::invalid_argument on malformed input.
    static Rational parse(const std::string& text);

private:
    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int_t g = detail::gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    int_t num_;
    int_t den_;
};

inline Rational abs(const Rational& r) {
    return r.num() < 0 ? -r : r;
}

inline Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    auto parse_int = [](const std::string& s) -> int_t {
        if (s.empty()) throw std::invalid_argument("empty integer literal");
        std::size_t i = 0;
        bool neg = false;
        if (s[i] == '+' || s[i] == '-') {
            neg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) throw std::invalid_argument("malformed integer: " + s);
        int_t v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("malformed integer: " + s);
            v = detail::checked_add(detail::checked_mul(v, 10), s[i] - '0');
        }
        return neg ? -v : v;
    };
    if (slash != std::string::npos) {
        int_t n = parse_int(text.substr(0, slash));
        int_t d = parse_int(text.substr(slash + 1));
        return from_parts(n, d);
    }
    // Decimal form: [sign] digits [. digits] [e [sign] digits]
    std::string mantissa = text;
    long long exp10 = 0;
    auto epos = text.find_first_of("eE");
    if (epos != std::string::npos) {
        mantissa = text.substr(0, epos);
        int_t e = parse_int(text.substr(epos + 1));
        if (e > 60 || e < -60) throw std::invalid_argument("exponent out of range: " + text);
        exp10 = static_cast<long long>(e);
    }
    auto dot = mantissa.find('.');
    std::string digits = mantissa;
    if (dot != std::string::npos) {
        digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
        exp10 -= static_cast<long long>(mantissa.size() - dot - 1);
    }
    if (digits == "-" || digits == "+" || digits.empty())
        throw std::invalid_argument("malformed rational literal: " + text);
    int_t n = parse_int(digits);
    int_t d = 1;
    while (exp10 > 0) {
        n = detail::checked_mul(n, 10);
        --exp10;
    }
    while (exp10 < 0) {
        d = detail::checked_mul(d, 10);
        ++exp10;
    }
    return from_parts(n, d);
}

} // namespace espr

namespace Eigen {

template <>
struct NumTraits<espr::Rational> : GenericNumTraits<espr::Rational> {
    using Real = espr::Rational;
    using NonInteger = espr::Rational;
    using Nested = espr::Rational;
    using Literal = long long;

    static inline Real epsilon() { return espr::Rational(0); }
    static inline Real dummy_precision() { return espr::Rational(0); }
    static inline int digits10() { return 0; }

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 10,
        MulCost = 10
    };
};

} // namespace Eigen

#endif // ESPR_RATIONAL_HPP
