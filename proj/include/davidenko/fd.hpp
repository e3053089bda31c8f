#ifndef DAVIDENKO_FD_HPP
#define DAVIDENKO_FD_HPP

#include <functional>

#include "davidenko/core.hpp"

namespace davidenko {

using VectorMap = std::function<Vector(const Vector&)>;
using HomotopyMap = std::function<Vector(double, const Vector&)>;

/// Central-difference Jacobian: entry (i,j) = (f_i(x+h e_j) - f_i(x-h e_j)) / (2h).
inline Matrix fd_jacobian(const VectorMap& f, const Vector& x, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("fd_jacobian: step must be positive");
    Vector xp = x, xm = x;
    Matrix jac;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        Vector fp = f(xp);
        Vector fm = f(xm);
        require_finite(fp, "fd_jacobian sample");
        require_finite(fm, "fd_jacobian sample");
        if (jac.size() == 0)
            jac.resize(fp.size(), x.size());
        if (fp.size() != jac.rows() || fm.size() != jac.rows())
            throw EvaluationError("fd_jacobian: inconsistent output length");
        jac.col(j) = (fp - fm) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    if (jac.size() == 0) {  // zero-dimensional input
        Vector f0 = f(x);
        jac.resize(f0.size(), 0);
    }
    return jac;
}

/// d/dt of F(t,x), second order; one-sided at the ends of [0,1].
inline Vector fd_time_derivative(const HomotopyMap& F, double t, const Vector& x, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("fd_time_derivative: step must be positive");
    Vector d;
    if (t - h >= 0.0 && t + h <= 1.0) {
        d = (F(t + h, x) - F(t - h, x)) / (2.0 * h);
    } else if (t - h < 0.0) {
        d = (-3.0 * F(t, x) + 4.0 * F(t + h, x) - F(t + 2.0 * h, x)) / (2.0 * h);
    } else {
        d = (3.0 * F(t, x) - 4.0 * F(t - h, x) + F(t - 2.0 * h, x)) / (2.0 * h);
    }
    require_finite(d, "fd_time_derivative");
    return d;
}

}  // namespace davidenko

#endif
