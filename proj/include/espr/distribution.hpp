#ifndef ESPR_DISTRIBUTION_HPP
#define ESPR_DISTRIBUTION_HPP

#include <Eigen/Core>

#include "espr/graph.hpp"
#include "espr/scalar.hpp"

namespace espr {

template <ProbabilityScalar S>
DegreeDistribution<S> padded(const DegreeDistribution<S>& d, Eigen::Index len) {
    if (d.size() >= len) return d;
    DegreeDistribution<S> out = DegreeDistribution<S>::Constant(len, S(0));
    out.head(d.size()) = d;
    return out;
}

template <ProbabilityScalar S>
S l1_distance(const DegreeDistribution<S>& a, const DegreeDistribution<S>& b) {
    const Eigen::Index len = std::max(a.size(), b.size());
    DegreeDistribution<S> pa = padded(a, len);
    DegreeDistribution<S> pb = padded(b, len);
    S acc(0);
    for (Eigen::Index i = 0; i < len; ++i) acc += abs_value<S>(pa[i] - pb[i]);
    return acc;
}

template <ProbabilityScalar S>
S max_abs_difference(const DegreeDistribution<S>& a, const DegreeDistribution<S>& b) {
    const Eigen::Index len = std::max(a.size(), b.size());
    DegreeDistribution<S> pa = padded(a, len);
    DegreeDistribution<S> pb = padded(b, len);
    S best(0);
    for (Eigen::Index i = 0; i < len; ++i) {
        S d = abs_value<S>(pa[i] - pb[i]);
        if (best < d) best = d;
    }
    return best;
}

/// Total-variation distance: half the L1 distance.
template <ProbabilityScalar S>
S total_variation(const DegreeDistribution<S>& a, const DegreeDistribution<S>& b) {
    return l1_distance(a, b) / S(2);
}

template <ProbabilityScalar S>
bool is_probability_vector(const DegreeDistribution<S>& d, double tol = 1e-12) {
    S sum(0);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] < S(0)) return false;
        sum += d[i];
    }
    return within<S>(sum, S(1), tol);
}

} // namespace espr

#endif // ESPR_DISTRIBUTION_HPP
