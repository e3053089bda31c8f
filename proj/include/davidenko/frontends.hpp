#ifndef DAVIDENKO_FRONTENDS_HPP
#define DAVIDENKO_FRONTENDS_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "davidenko/flow.hpp"
#include "davidenko/problem.hpp"

namespace davidenko {

// ---------------------------------------------------------------------------
// boundary conditions (the four admissibility inequalities at boundary points)

struct BoundaryPointCheck {
    Vector x;
    Vector fx;
    bool cond1 = false;  // ||f(x)|| <= ||x||
    bool cond2 = false;  // ||f(x)|| <= ||x - f(x)||
    bool cond3 = false;  // ||f(x)|| <= sqrt(||x||^2 + ||x - f(x)||^2)
    bool cond4 = false;  // ||f(x)|| <= max(||x - f(x)||, ||x||)
    bool satisfies_some() const noexcept { return cond1 || cond2 || cond3 || cond4; }
};

struct BoundaryConditionReport {
    std::vector<BoundaryPointCheck> points;
    bool all_points_satisfy_some = true;
};

/// Evaluate the four boundary inequalities at the given boundary samples.
/// Each sample must lie within boundary_epsilon of the domain boundary.
inline BoundaryConditionReport check_boundary_conditions(const FixedPointProblem& fp,
                                                         const std::vector<Vector>& samples,
                                                         const SolverConfig& cfg = {}) {
    BoundaryConditionReport rep;
    for (const auto& x : samples) {
        if (fp.domain.boundary_distance(x) > cfg.boundary_epsilon)
            throw DomainViolationError("check_boundary_conditions: sample is not on the boundary");
        BoundaryPointCheck c;
        c.x = x;
        c.fx = fp.eval_f(x);
        require_finite(c.fx, "eval_f");
        double nf = c.fx.norm();
        double nx = x.norm();
        double nd = (x - c.fx).norm();
        c.cond1 = nf <= nx;
        c.cond2 = nf <= nd;
        c.cond3 = nf <= std::sqrt(nx * nx + nd * nd);
        c.cond4 = nf <= std::max(nd, nx);
        rep.all_points_satisfy_some = rep.all_points_satisfy_some && c.satisfies_some();
        rep.points.push_back(std::move(c));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// fixed-point frontend

struct FixedSolution {
    Vector x_hat;
    double residual = 0.0;  // ||f(x_hat) - x_hat||
};

/// The obstruction produced when the continuation escapes the domain:
/// a boundary point xi with f(xi) = xi / tau.
struct EigenpairSolution {
    double tau = 0.0;
    Vector xi;
    double eigen_residual = 0.0;  // ||f(xi) - xi/tau||
};

struct FixedPointFailure {
    ContinuationOutcome outcome;
};

struct FixedPointResult {
    std::variant<FixedSolution, EigenpairSolution, FixedPointFailure> value;
    std::optional<BoundaryConditionReport> boundary_report;  // attached when tau < 1
    Trace trace;

    bool is_fixed() const noexcept { return value.index() == 0; }
    bool is_eigenpair() const noexcept { return value.index() == 1; }
    bool is_failure() const noexcept { return value.index() == 2; }
    const FixedSolution& fixed() const { return std::get<FixedSolution>(value); }
    const EigenpairSolution& eigenpair() const { return std::get<EigenpairSolution>(value); }
    const FixedPointFailure& failure() const { return std::get<FixedPointFailure>(value); }
};

/**
 * Continue the fixed-point homotopy x - t f(x) from the origin. An interior
 * zero at t=1 is a fixed point of f; a boundary approach at tau yields the
 * eigenpair f(xi) = xi/tau, with the boundary-condition report attached when
 * tau < 1.
 */
inline FixedPointResult solve_fixed_point(const FixedPointProblem& fp, const SolverConfig& cfg) {
    HomotopyProblem h = make_fixed_point_homotopy(fp, cfg.fd_step);
    auto [trace, outcome] = integrate(h, Vector::Zero(fp.dim), cfg);

    FixedPointResult result;
    result.trace = std::move(trace);

    if (const auto* iz = std::get_if<InteriorZero>(&outcome)) {
        Vector fx = fp.eval_f(iz->x1);
        double res = (fx - iz->x1).norm();
        if (res <= cfg.drift_tol) {
            result.value = FixedSolution{iz->x1, res};
            return result;
        }
        result.value = FixedPointFailure{std::move(outcome)};
        return result;
    }
    if (const auto* ba = std::get_if<BoundaryApproach>(&outcome)) {
        double tau = ba->tau;
        Vector fx = fp.eval_f(ba->x_near);
        double eigen_res = (fx - ba->x_near / tau).norm();
        if (eigen_res <= 10.0 * cfg.drift_tol * (1.0 + 1.0 / tau)) {
            result.value = EigenpairSolution{tau, ba->x_near, eigen_res};
            if (tau < 1.0 - 1e-12)
                result.boundary_report = check_boundary_conditions(fp, {ba->x_near}, cfg);
            return result;
        }
        result.value = FixedPointFailure{std::move(outcome)};
        return result;
    }
    result.value = FixedPointFailure{std::move(outcome)};
    return result;
}

// ---------------------------------------------------------------------------
// inverse-function frontend

/// Failure of an inverse solve; carries the terminal outcome and the partial trace.
class InverseMapError : public std::runtime_error {
public:
    InverseMapError(ContinuationOutcome outcome, Trace trace)
        : std::runtime_error(std::string("inverse solve failed: ") + outcome_name(outcome)),
          outcome_(std::move(outcome)),
          trace_(std::move(trace)) {}
    const ContinuationOutcome& outcome() const noexcept { return outcome_; }
    const Trace& trace() const noexcept { return trace_; }

private:
    ContinuationOutcome outcome_;
    Trace trace_;
};

struct InverseResult {
    Vector psi;           // the point with f(psi) ~= target_y
    double residual = 0;  // ||f(psi) - target_y||
    Trace trace;
};

/// Full inverse solve with trace; throws InverseMapError on failure.
inline InverseResult solve_inverse(const InverseFunctionProblem& ip, const SolverConfig& cfg) {
    HomotopyProblem h = make_inverse_homotopy(ip);
    auto [trace, outcome] = integrate(h, Vector::Zero(ip.dim), cfg);
    if (const auto* iz = std::get_if<InteriorZero>(&outcome)) {
        Vector fx = ip.eval_f(iz->x1);
        double res = (fx - ip.target_y).norm();
        if (res <= cfg.drift_tol)
            return {iz->x1, res, std::move(trace)};
    }
    throw InverseMapError(std::move(outcome), std::move(trace));
}

/// The global inverse map psi(y): the endpoint of the inverse homotopy flow.
inline Vector inverse_map(const InverseFunctionProblem& ip, const SolverConfig& cfg) {
    return solve_inverse(ip, cfg).psi;
}

}  // namespace davidenko

#endif
