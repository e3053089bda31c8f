#ifndef DAVIDENKO_PROBLEM_HPP
#define DAVIDENKO_PROBLEM_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "davidenko/config.hpp"
#include "davidenko/core.hpp"
#include "davidenko/domain.hpp"
#include "davidenko/fd.hpp"

namespace davidenko {

enum class DerivativeMode { Analytic, FiniteDifference };

/**
 * A homotopy F : [0,1] x D -> R^m with its partial derivatives F_t and F_x.
 * Always constructed through one of the make_* functions below, which either
 * take analytic derivatives or synthesize central-difference ones. Immutable
 * after construction; evaluators are safe to share across concurrent runs.
 */
struct HomotopyProblem {
    int dim_x = 0;
    int dim_y = 0;
    std::function<Vector(double, const Vector&)> eval_F;
    std::function<Vector(double, const Vector&)> eval_Ft;
    std::function<Matrix(double, const Vector&)> eval_Fx;
    DerivativeMode derivative_mode = DerivativeMode::Analytic;
    DomainSpec domain = DomainSpec::whole_space();
};

/// Fixed-point problem for f : D -> R^n. An empty eval_fprime selects
/// finite-difference derivatives.
struct FixedPointProblem {
    int dim = 0;
    std::function<Vector(const Vector&)> eval_f;
    std::function<Matrix(const Vector&)> eval_fprime;
    DomainSpec domain = DomainSpec::whole_space();
};

/// Global inverse-function problem: find x with f(x) = target_y.
struct InverseFunctionProblem {
    int dim = 0;
    std::function<Vector(const Vector&)> eval_f;
    std::function<Matrix(const Vector&)> eval_fprime;
    Vector target_y;
};

namespace detail {

inline void check_dims(int dim_x, int dim_y) {
    if (dim_x < 1 || dim_y < 1)
        throw DimensionError("homotopy dimensions must be positive");
    if (dim_y > dim_x)
        throw DimensionError("dim_y must not exceed dim_x (the Jacobian needs a right inverse)");
}

}  // namespace detail

inline HomotopyProblem make_homotopy(int dim_x, int dim_y,
                                     std::function<Vector(double, const Vector&)> F,
                                     std::function<Vector(double, const Vector&)> Ft,
                                     std::function<Matrix(double, const Vector&)> Fx,
                                     DomainSpec domain) {
    detail::check_dims(dim_x, dim_y);
    if (!F || !Ft || !Fx)
        throw std::invalid_argument("make_homotopy: all three evaluators are required");
    HomotopyProblem p;
    p.dim_x = dim_x;
    p.dim_y = dim_y;
    p.eval_F = std::move(F);
    p.eval_Ft = std::move(Ft);
    p.eval_Fx = std::move(Fx);
    p.derivative_mode = DerivativeMode::Analytic;
    p.domain = std::move(domain);
    return p;
}

/// Homotopy with derivatives synthesized from F by central differences with
/// step fd_step * (1 + ||x||).
inline HomotopyProblem make_homotopy_fd(int dim_x, int dim_y,
                                        std::function<Vector(double, const Vector&)> F,
                                        DomainSpec domain, double fd_step = 1e-6) {
    detail::check_dims(dim_x, dim_y);
    if (!F)
        throw std::invalid_argument("make_homotopy_fd: evaluator is required");
    if (!(fd_step > 0.0))
        throw std::invalid_argument("make_homotopy_fd: fd_step must be positive");
    HomotopyProblem p;
    p.dim_x = dim_x;
    p.dim_y = dim_y;
    p.eval_F = F;
    p.eval_Ft = [F, fd_step](double t, const Vector& x) {
        return fd_time_derivative(F, t, x, fd_step);
    };
    p.eval_Fx = [F, fd_step](double t, const Vector& x) {
        auto slice = [&](const Vector& z) { return F(t, z); };
        return fd_jacobian(slice, x, fd_step * (1.0 + x.norm()));
    };
    p.derivative_mode = DerivativeMode::FiniteDifference;
    p.domain = std::move(domain);
    return p;
}

/**
 * The fixed-point homotopy F(t,x) = x - t f(x), so F_t = -f(x) and
 * F_x = I - t f'(x). F(0,x) = x pins the starting zero at the origin, which
 * must therefore lie in the domain interior.
 */
inline HomotopyProblem make_fixed_point_homotopy(const FixedPointProblem& fp,
                                                 double fd_step = 1e-6) {
    if (fp.dim < 1)
        throw DimensionError("fixed-point problem: dim must be positive");
    if (!fp.eval_f)
        throw std::invalid_argument("fixed-point problem: eval_f is required");
    Vector origin = Vector::Zero(fp.dim);
    if (!fp.domain.contains(origin))
        throw DomainViolationError("fixed-point homotopy: 0 must lie in the domain interior");

    auto f = fp.eval_f;
    HomotopyProblem p;
    p.dim_x = fp.dim;
    p.dim_y = fp.dim;
    p.domain = fp.domain;
    p.eval_F = [f](double t, const Vector& x) -> Vector { return x - t * f(x); };
    p.eval_Ft = [f](double, const Vector& x) -> Vector { return -f(x); };
    if (fp.eval_fprime) {
        auto fprime = fp.eval_fprime;
        int n = fp.dim;
        p.eval_Fx = [fprime, n](double t, const Vector& x) -> Matrix {
            return Matrix::Identity(n, n) - t * fprime(x);
        };
        p.derivative_mode = DerivativeMode::Analytic;
    } else {
        int n = fp.dim;
        p.eval_Fx = [f, n, fd_step](double t, const Vector& x) -> Matrix {
            Matrix fx = fd_jacobian(f, x, fd_step * (1.0 + x.norm()));
            return Matrix::Identity(n, n) - t * fx;
        };
        p.derivative_mode = DerivativeMode::FiniteDifference;
    }
    return p;
}

/**
 * The inverse homotopy F(t,x) = f(x) - (1-t) f(0) - t y. F(0,0) = 0 exactly,
 * F(1,x) = f(x) - y, F_t is the constant f(0) - y, and F_x = f'(x). The
 * domain is the whole space.
 */
inline HomotopyProblem make_inverse_homotopy(const InverseFunctionProblem& ip) {
    if (ip.dim < 1)
        throw DimensionError("inverse problem: dim must be positive");
    if (!ip.eval_f || !ip.eval_fprime)
        throw std::invalid_argument("inverse problem: eval_f and eval_fprime are required");
    if (ip.target_y.size() != ip.dim)
        throw DimensionError("inverse problem: target_y length does not match dim");

    auto f = ip.eval_f;
    auto fprime = ip.eval_fprime;
    Vector y = ip.target_y;
    Vector f0 = f(Vector::Zero(ip.dim));
    require_finite(f0, "inverse homotopy f(0)");
    if (f0.size() != ip.dim)
        throw DimensionError("inverse problem: eval_f output length does not match dim");

    HomotopyProblem p;
    p.dim_x = ip.dim;
    p.dim_y = ip.dim;
    p.domain = DomainSpec::whole_space();
    p.eval_F = [f, f0, y](double t, const Vector& x) -> Vector {
        return f(x) - (1.0 - t) * f0 - t * y;
    };
    Vector ft = f0 - y;
    p.eval_Ft = [ft](double, const Vector&) -> Vector { return ft; };
    p.eval_Fx = [fprime](double, const Vector& x) -> Matrix { return fprime(x); };
    p.derivative_mode = DerivativeMode::Analytic;
    return p;
}

// ---------------------------------------------------------------------------
// validation

struct Violation {
    std::string code;     // "domain-violation", "initial-residual", "shape-violation",
                          // "derivative-mismatch", "evaluator-fault"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool clean() const noexcept { return violations.empty(); }
    std::string joined() const {
        std::string s;
        for (const auto& v : violations) {
            if (!s.empty()) s += "; ";
            s += v.code + ": " + v.message;
        }
        return s;
    }
};

/**
 * Diagnostic pre-flight for a run from x0: domain membership, the starting
 * residual F(0,x0), evaluator shapes, finiteness, and (in analytic mode)
 * agreement of the supplied derivatives with central differences at x0.
 * Violations are report entries, never exceptions.
 */
inline ValidationReport validate_problem(const HomotopyProblem& p, const Vector& x0,
                                         const SolverConfig& cfg) {
    ValidationReport rep;
    auto add = [&rep](std::string code, std::string msg) {
        rep.violations.push_back({std::move(code), std::move(msg)});
    };

    if (x0.size() != p.dim_x) {
        add("shape-violation", "x0 length " + std::to_string(x0.size()) +
                                   " does not match dim_x " + std::to_string(p.dim_x));
        return rep;
    }
    if (!all_finite(x0)) {
        add("domain-violation", "x0 has non-finite components");
        return rep;
    }
    if (!p.domain.contains(x0))
        add("domain-violation", "x0 is not in the domain interior");

    try {
        Vector F0 = p.eval_F(0.0, x0);
        if (F0.size() != p.dim_y)
            add("shape-violation", "eval_F output length " + std::to_string(F0.size()) +
                                       " does not match dim_y " + std::to_string(p.dim_y));
        else if (!all_finite(F0))
            add("evaluator-fault", "eval_F(0, x0) is non-finite");
        else if (F0.norm() > cfg.drift_tol)
            add("initial-residual", "||F(0,x0)|| = " + std::to_string(F0.norm()) +
                                        " exceeds drift_tol");
    } catch (const std::exception& e) {
        add("evaluator-fault", std::string("eval_F threw: ") + e.what());
        return rep;
    }

    try {
        Vector Ft0 = p.eval_Ft(0.0, x0);
        if (Ft0.size() != p.dim_y)
            add("shape-violation", "eval_Ft output length does not match dim_y");
        else if (!all_finite(Ft0))
            add("evaluator-fault", "eval_Ft(0, x0) is non-finite");
    } catch (const std::exception& e) {
        add("evaluator-fault", std::string("eval_Ft threw: ") + e.what());
    }

    try {
        Matrix Fx0 = p.eval_Fx(0.0, x0);
        if (Fx0.rows() != p.dim_y || Fx0.cols() != p.dim_x)
            add("shape-violation", "eval_Fx shape " + std::to_string(Fx0.rows()) + "x" +
                                       std::to_string(Fx0.cols()) + " does not match " +
                                       std::to_string(p.dim_y) + "x" + std::to_string(p.dim_x));
        else if (!all_finite(Fx0))
            add("evaluator-fault", "eval_Fx(0, x0) is non-finite");
    } catch (const std::exception& e) {
        add("evaluator-fault", std::string("eval_Fx threw: ") + e.what());
    }

    if (!rep.clean() || p.derivative_mode != DerivativeMode::Analytic)
        return rep;

    // analytic derivatives against central differences at x0
    const double h = cfg.fd_step * (1.0 + x0.norm());
    try {
        for (double t : {0.0, 0.5, 1.0}) {
            auto slice = [&](const Vector& z) { return p.eval_F(t, z); };
            Matrix fd = fd_jacobian(slice, x0, h);
            Matrix an = p.eval_Fx(t, x0);
            double err = (an - fd).norm() / (1.0 + an.norm());
            if (err > 1e-4) {
                add("derivative-mismatch",
                    "eval_Fx disagrees with finite differences at x0 (t=" + std::to_string(t) +
                        ", relative error " + std::to_string(err) + ")");
                break;
            }
        }
        for (double t : {0.0, 0.5, 1.0}) {
            Vector fd = fd_time_derivative(p.eval_F, t, x0, cfg.fd_step);
            Vector an = p.eval_Ft(t, x0);
            double err = (an - fd).norm() / (1.0 + an.norm());
            if (err > 1e-4) {
                add("derivative-mismatch",
                    "eval_Ft disagrees with finite differences at x0 (t=" + std::to_string(t) +
                        ", relative error " + std::to_string(err) + ")");
                break;
            }
        }
    } catch (const std::exception& e) {
        add("evaluator-fault", std::string("derivative probe threw: ") + e.what());
    }

    return rep;
}

}  // namespace davidenko

#endif
