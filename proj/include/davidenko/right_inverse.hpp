#ifndef DAVIDENKO_RIGHT_INVERSE_HPP
#define DAVIDENKO_RIGHT_INVERSE_HPP

#include <Eigen/SVD>
#include <limits>

#include "davidenko/core.hpp"

namespace davidenko {

/// Ratio of largest to smallest singular value (>= 1), +inf if rank-deficient.
inline double condition_estimate(const Matrix& jac) {
    require_finite(jac, "condition_estimate input");
    if (jac.rows() == 0 || jac.cols() == 0)
        throw DimensionError("condition_estimate: empty matrix");
    Eigen::JacobiSVD<Matrix> svd(jac);
    const auto& sv = svd.singularValues();
    double smax = sv(0);
    double smin = sv(sv.size() - 1);
    if (smin <= 0.0 || smax <= 0.0)
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

/**
 * Action of the minimum-norm right inverse of an m-by-n Jacobian (m <= n) on v:
 * returns the w of smallest Euclidean norm with J w = v. Computed from the SVD
 * with one step of residual refinement. Throws SingularJacobianError when the
 * condition estimate exceeds condition_max.
 */
inline Vector right_inverse_apply(const Matrix& jac, const Vector& v, double condition_max) {
    if (jac.rows() > jac.cols())
        throw DimensionError("right_inverse_apply: needs rows <= cols (onto map)");
    if (v.size() != jac.rows())
        throw DimensionError("right_inverse_apply: rhs length does not match row count");
    require_finite(jac, "right_inverse_apply jacobian");
    require_finite(v, "right_inverse_apply rhs");

    Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double smax = sv(0);
    double smin = sv(sv.size() - 1);
    double cond = (smin > 0.0 && smax > 0.0) ? smax / smin
                                             : std::numeric_limits<double>::infinity();
    if (!(cond <= condition_max))
        throw SingularJacobianError(cond);

    auto solve_min_norm = [&](const Vector& rhs) -> Vector {
        Vector y = svd.matrixU().transpose() * rhs;
        y.array() /= sv.array();
        return svd.matrixV() * y;
    };

    Vector w = solve_min_norm(v);
    // one refinement pass; the correction lives in the row space, so the
    // minimum-norm character of w is preserved
    Vector r = v - jac * w;
    w += solve_min_norm(r);
    return w;
}

}  // namespace davidenko

#endif
