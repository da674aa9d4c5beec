#ifndef ESPR_POLYNOMIAL_HPP
#define ESPR_POLYNOMIAL_HPP

#include <map>
#include <sstream>
#include <vector>

#include "espr/rational.hpp"

namespace espr {

/// Sparse multivariate polynomial with rational coefficients. Only as
/// general as the symbolic identity checks need: add, multiply, and
/// substitute a linear form for one variable.
class Polynomial {
public:
    /// Sorted variable indices, one entry per power (x0*x0*x3 -> {0,0,3}).
    using Monomial = std::vector<int>;

    Polynomial() = default;

    static Polynomial constant(const Rational& c) {
        Polynomial p;
        if (!c.is_zero()) p.terms_[{}] = c;
        return p;
    }

    static Polynomial variable(int index) {
        Polynomial p;
        p.terms_[{index}] = Rational(1);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    const std::map<Monomial, Rational>& terms() const { return terms_; }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m;
                m.reserve(ma.size() + mb.size());
                std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
                out.add_term(m, ca * cb);
            }
        }
        return out;
    }

    friend Polynomial operator*(const Rational& c, const Polynomial& p) {
        return Polynomial::constant(c) * p;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms_ == b.terms_;
    }

    /// Replaces every occurrence of the variable with the given
    /// polynomial (used to eliminate one coordinate against the
    /// normalization constraint).
    Polynomial substitute(int var, const Polynomial& value) const {
        Polynomial out;
        for (const auto& [m, c] : terms_) {
            Polynomial term = Polynomial::constant(c);
            int power = 0;
            Monomial rest;
            for (int v : m) {
                if (v == var) ++power;
                else rest.push_back(v);
            }
            if (!rest.empty()) {
                Polynomial rest_poly;
                rest_poly.terms_[rest] = Rational(1);
                term = term * rest_poly;
            }
            for (int i = 0; i < power; ++i) term = term * value;
            out += term;
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c << ")";
            for (int v : m) os << "*x" << v;
        }
        return os.str();
    }

private:
    void add_term(const Monomial& m, const Rational& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_[m] = c;
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    std::map<Monomial, Rational> terms_;
};

} // namespace espr

#endif // ESPR_POLYNOMIAL_HPP
