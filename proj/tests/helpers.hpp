#ifndef DAVIDENKO_TEST_HELPERS_HPP
#define DAVIDENKO_TEST_HELPERS_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

#include "davidenko/davidenko.hpp"

namespace test_helpers {

// independent scalar root oracle: plain bisection to machine-level width
inline double bisect_root(const std::function<double(double)>& g, double lo, double hi) {
    double glo = g(lo), ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (glo * ghi > 0.0) throw std::invalid_argument("bisect_root: no sign change");
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline davidenko::Vector vec1(double a) {
    davidenko::Vector v(1);
    v << a;
    return v;
}

inline davidenko::Vector vec2(double a, double b) {
    davidenko::Vector v(2);
    v << a, b;
    return v;
}

// scalar fixed-point problem from plain functions
inline davidenko::FixedPointProblem scalar_fixed_point(std::function<double(double)> f,
                                                       std::function<double(double)> fp,
                                                       davidenko::DomainSpec domain) {
    davidenko::FixedPointProblem p;
    p.dim = 1;
    p.eval_f = [f](const davidenko::Vector& x) { return vec1(f(x[0])); };
    p.eval_fprime = [fp](const davidenko::Vector& x) {
        davidenko::Matrix m(1, 1);
        m << fp(x[0]);
        return m;
    };
    p.domain = std::move(domain);
    return p;
}

}  // namespace test_helpers

#endif
