#ifndef DAVIDENKO_FLOW_HPP
#define DAVIDENKO_FLOW_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "davidenko/config.hpp"
#include "davidenko/core.hpp"
#include "davidenko/problem.hpp"
#include "davidenko/right_inverse.hpp"

namespace davidenko {

struct TrajectoryState {
    double t = 0.0;
    Vector x;
    double residual = 0.0;      // ||F(t,x)||
    double step_size = 0.0;     // step that produced this state
    double tangent_norm = 0.0;  // ||a(t,x)||
};

struct TraceEvent {
    double t = 0.0;
    std::string kind;
    std::string detail;
};

struct Trace {
    std::vector<TrajectoryState> states;  // strictly increasing t, first at t=0
    std::vector<TraceEvent> events;
    double growth_constant_estimate = 0.0;  // max ||a|| / (||x||+1) over states
};

// Terminal results of a continuation run. The first two realize the theorem
// dichotomy; the rest flag numerically violated hypotheses.
struct InteriorZero {
    Vector x1;
    double residual = 0.0;
};
struct BoundaryApproach {
    double tau = 0.0;
    Vector x_near;
    double residual = 0.0;
    double boundary_distance = 0.0;
};
struct SingularJacobian {
    double t = 0.0;
    Vector x;
    double condition = 0.0;
};
struct StepFailure {
    double t = 0.0;
    std::string reason;
};
struct Divergence {
    double t = 0.0;
    double norm = 0.0;
};

using ContinuationOutcome =
    std::variant<InteriorZero, BoundaryApproach, SingularJacobian, StepFailure, Divergence>;

inline const char* outcome_name(const ContinuationOutcome& oc) {
    switch (oc.index()) {
        case 0: return "interior_zero";
        case 1: return "boundary_approach";
        case 2: return "singular_jacobian";
        case 3: return "step_failure";
        default: return "divergence";
    }
}

/**
 * Tangent of the Davidenko flow: the minimum-norm solution a of
 * F_x(t,x) a = -F_t(t,x).
 */
inline Vector tangent_field(const HomotopyProblem& p, double t, const Vector& x,
                            const SolverConfig& cfg) {
    Matrix jac = p.eval_Fx(t, x);
    if (jac.rows() != p.dim_y || jac.cols() != p.dim_x)
        throw EvaluationError("tangent_field: eval_Fx shape mismatch");
    Vector ft = p.eval_Ft(t, x);
    if (ft.size() != p.dim_y)
        throw EvaluationError("tangent_field: eval_Ft length mismatch");
    require_finite(jac, "eval_Fx");
    require_finite(ft, "eval_Ft");
    return right_inverse_apply(jac, Vector(-ft), cfg.condition_max);
}

namespace detail {

inline std::pair<Vector, double> newton_correct_impl(const HomotopyProblem& p, double t,
                                                     const Vector& x, const SolverConfig& cfg) {
    Vector xc = x;
    Vector r = p.eval_F(t, xc);
    if (r.size() != p.dim_y)
        throw EvaluationError("newton_correct: eval_F length mismatch");
    require_finite(r, "eval_F");
    double res = r.norm();
    if (res <= cfg.drift_tol)
        return {xc, res};
    for (int it = 0; it < cfg.corrector_max_iters; ++it) {
        Matrix jac = p.eval_Fx(t, xc);
        require_finite(jac, "eval_Fx");
        Vector step = right_inverse_apply(jac, r, cfg.condition_max);
        xc -= step;
        if (!all_finite(xc))
            throw CorrectorDivergenceError("corrector iterate is non-finite");
        if (!p.domain.contains(xc))
            throw CorrectorDivergenceError("corrector iterate left the domain", true);
        r = p.eval_F(t, xc);
        require_finite(r, "eval_F");
        res = r.norm();
        if (res <= cfg.drift_tol)
            return {xc, res};
    }
    throw CorrectorDivergenceError("corrector did not reach drift_tol within budget");
}

// Extra Newton polish of a terminal zero beyond the drift tolerance. Without
// it a double root parks ~sqrt(drift_tol) away from the true zero; with it
// the endpoint matches an exhaustive search to oracle accuracy. Keeps the
// best iterate seen and never raises the residual.
inline std::pair<Vector, double> sharpen_zero(const HomotopyProblem& p, double t, Vector x,
                                              double res, const SolverConfig& cfg) {
    Vector best = x;
    double best_res = res;
    for (int it = 0; it < 2 * cfg.corrector_max_iters; ++it) {
        try {
            Matrix jac = p.eval_Fx(t, x);
            if (!all_finite(jac)) break;
            Vector r = p.eval_F(t, x);
            Vector step = right_inverse_apply(jac, r, cfg.condition_max);
            if (!all_finite(step) || step.norm() == 0.0) break;
            x -= step;
            if (!all_finite(x) || !p.domain.contains(x)) break;
            double res_n = p.eval_F(t, x).norm();
            if (res_n < best_res) {
                best = x;
                best_res = res_n;
            } else if (it > 2) {
                break;  // stagnated
            }
            if (step.norm() <= 1e-15 * (1.0 + x.norm())) break;
        } catch (const std::exception&) {
            break;
        }
    }
    return {std::move(best), best_res};
}

struct StageFailure {
    std::string reason;
    std::optional<double> singular_cond;
};

// One Dormand-Prince 5(4) step; returns the fifth-order point and the
// embedded error vector, or nullopt when a stage evaluation fails.
inline std::optional<std::pair<Vector, Vector>> dp5_step(const HomotopyProblem& p, double t,
                                                         const Vector& x, const Vector& k1,
                                                         double h, const SolverConfig& cfg,
                                                         StageFailure* fail) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    try {
        Vector k2 = tangent_field(p, t + c2 * h, x + h * (a21 * k1), cfg);
        Vector k3 = tangent_field(p, t + c3 * h, x + h * (a31 * k1 + a32 * k2), cfg);
        Vector k4 = tangent_field(p, t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3), cfg);
        Vector k5 = tangent_field(p, t + c5 * h,
                                  x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), cfg);
        Vector k6 = tangent_field(
            p, t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), cfg);
        Vector x5 = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        if (!all_finite(x5)) {
            if (fail) *fail = {"non-finite predictor state", std::nullopt};
            return std::nullopt;
        }
        Vector k7 = tangent_field(p, t + h, x5, cfg);
        Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        return std::make_pair(std::move(x5), std::move(err));
    } catch (const SingularJacobianError& e) {
        if (fail) *fail = {"singular jacobian during a stage evaluation", e.condition()};
        return std::nullopt;
    } catch (const EvaluationError& e) {
        if (fail) *fail = {e.what(), std::nullopt};
        return std::nullopt;
    }
}

}  // namespace detail

/**
 * Newton projection back onto the zero set of F(t, .) at fixed t. Returns the
 * input unchanged when already within drift_tol; otherwise iterates
 * x <- x - S(t,x) F(t,x) up to corrector_max_iters times.
 */
inline Vector newton_correct(const HomotopyProblem& p, double t, const Vector& x,
                             const SolverConfig& cfg) {
    return detail::newton_correct_impl(p, t, x, cfg).first;
}

/**
 * Deterministic terminal classification: boundary proximity wins over the
 * t=1 interior-zero test, which wins over the divergence test.
 */
inline ContinuationOutcome classify_termination(const TrajectoryState& s, const HomotopyProblem& p,
                                                const SolverConfig& cfg) {
    double bdist = p.domain.boundary_distance(s.x);
    if (bdist <= cfg.boundary_epsilon)
        return BoundaryApproach{s.t, s.x, s.residual, bdist};
    if (s.t >= 1.0 - 1e-12 && p.domain.contains(s.x) &&
        s.residual <= std::min(cfg.drift_tol, cfg.zero_radius))
        return InteriorZero{s.x, s.residual};
    if (s.x.norm() > 1.0 / cfg.min_step)
        return Divergence{s.t, s.x.norm()};
    if (s.t >= 1.0 - 1e-12)
        return StepFailure{s.t, "residual above tolerance at t=1"};
    return StepFailure{s.t, "no terminal condition met"};
}

struct GronwallReport {
    double k_hat = 0.0;
    bool envelope_ok = true;
    std::optional<double> first_violation;
};

/// Check the trace against the envelope ||x(t)|| <= (||x(0)||+1) e^{k t} - 1
/// for a claimed growth constant k.
inline GronwallReport gronwall_monitor(const Trace& trace, double k) {
    if (trace.states.empty())
        throw std::invalid_argument("gronwall_monitor: trace is empty");
    GronwallReport rep;
    rep.k_hat = k;
    const double base = trace.states.front().x.norm() + 1.0;
    for (const auto& s : trace.states) {
        double bound = base * std::exp(k * s.t) - 1.0 + 1e-9;
        if (s.x.norm() > bound) {
            rep.envelope_ok = false;
            rep.first_violation = s.t;
            break;
        }
    }
    return rep;
}

/// Same check with k estimated from the trace itself.
inline GronwallReport gronwall_monitor(const Trace& trace) {
    if (trace.states.empty())
        throw std::invalid_argument("gronwall_monitor: trace is empty");
    double k = 0.0;
    for (const auto& s : trace.states)
        k = std::max(k, s.tangent_norm / (s.x.norm() + 1.0));
    return gronwall_monitor(trace, k);
}

/**
 * Integrate the continuation ODE x' = a(t,x) from a zero of F(0,.) at x0,
 * keeping ||F(t,x(t))|| <= drift_tol by Newton correction after every
 * accepted step, and classify the terminal state. The outcome is the result;
 * only exceptions escaping user evaluators propagate as C++ exceptions.
 */
inline std::pair<Trace, ContinuationOutcome> integrate(const HomotopyProblem& p, const Vector& x0,
                                                       const SolverConfig& cfg) {
    cfg.validate();
    Trace trace;
    auto finalize = [&trace](ContinuationOutcome oc) {
        return std::make_pair(std::move(trace), std::move(oc));
    };

    ValidationReport vrep = validate_problem(p, x0, cfg);
    if (!vrep.clean()) {
        trace.events.push_back({0.0, "validation-failure", vrep.joined()});
        return finalize(StepFailure{0.0, "validation failed: " + vrep.joined()});
    }

    const double divergence_norm = 1.0 / cfg.min_step;
    // the finish-at-1 correction is allowed only inside this terminal window
    const double endgame_window = std::sqrt(cfg.min_step);

    double t = 0.0;
    Vector x = x0;

    Vector a;
    try {
        a = tangent_field(p, t, x, cfg);
    } catch (const SingularJacobianError& e) {
        trace.events.push_back({t, "singular", "singular jacobian at the starting point"});
        return finalize(SingularJacobian{t, x, e.condition()});
    }

    if (p.domain.interior_margin(x) <= cfg.boundary_epsilon)
        return finalize(StepFailure{0.0, "x0 is within boundary_epsilon of the boundary"});

    double res = p.eval_F(t, x).norm();
    double k_hat = a.norm() / (x.norm() + 1.0);
    double h = std::clamp(0.01 / (1.0 + a.norm()), cfg.min_step, 0.1);
    trace.states.push_back({t, x, res, h, a.norm()});
    trace.growth_constant_estimate = k_hat;

    double err_prev = 1e-4;
    double cond_prev = 1.0;
    bool rejected_last = false;
    bool near_singular_noted = false;
    int accepted = 0;
    long attempts = 0;

    // Direct correction at t=1 when step control stalls inside the terminal
    // window (integrable endpoint singularities creep to a halt just short of
    // t=1). The trust radius bounds the move by the remaining path travel so
    // the corrector cannot silently hop to a different zero.
    auto try_endgame = [&]() -> std::optional<ContinuationOutcome> {
        double gap = 1.0 - t;
        if (gap <= 0.0 || gap > endgame_window)
            return std::nullopt;
        try {
            auto [xf, resf] = detail::newton_correct_impl(p, 1.0, x, cfg);
            double trust = 10.0 * (a.norm() + 1.0) * gap + 1e3 * cfg.drift_tol;
            if ((xf - x).norm() > trust || p.domain.interior_margin(xf) <= 0.0)
                return std::nullopt;
            std::tie(xf, resf) = detail::sharpen_zero(p, 1.0, xf, resf, cfg);
            Vector af;
            try {
                af = tangent_field(p, 1.0, xf, cfg);
            } catch (const SingularJacobianError& e) {
                trace.events.push_back({1.0, "singular", "singular jacobian at the corrected endpoint"});
                return SingularJacobian{1.0, xf, e.condition()};
            }
            trace.states.push_back({1.0, xf, resf, gap, af.norm()});
            k_hat = std::max(k_hat, af.norm() / (xf.norm() + 1.0));
            trace.growth_constant_estimate = k_hat;
            trace.events.push_back({1.0, "endgame", "finished by direct correction across the terminal gap"});
            return classify_termination(trace.states.back(), p, cfg);
        } catch (const SingularJacobianError& e) {
            trace.events.push_back({t, "singular", "singular jacobian in the terminal correction"});
            return SingularJacobian{t, x, e.condition()};
        } catch (const CorrectorDivergenceError&) {
            return std::nullopt;
        } catch (const EvaluationError&) {
            return std::nullopt;
        }
    };

    // Bisection on the interior margin along the rejected step: find the
    // corrected point that is still inside but within boundary_epsilon of
    // the boundary.
    auto localize_boundary = [&](double h_step) -> ContinuationOutcome {
        double s_lo = 0.0, s_hi = 1.0;
        for (int it = 0; it < 200 && (s_hi - s_lo) > 1e-16; ++it) {
            double s = 0.5 * (s_lo + s_hi);
            double ts = t + s * h_step;
            detail::StageFailure sf;
            auto pred = detail::dp5_step(p, t, x, a, s * h_step, cfg, &sf);
            if (!pred) {
                s_hi = s;
                continue;
            }
            if (p.domain.interior_margin(pred->first) <= 0.0) {
                s_hi = s;
                continue;
            }
            Vector xc;
            double rc;
            try {
                std::tie(xc, rc) = detail::newton_correct_impl(p, ts, pred->first, cfg);
            } catch (const std::exception&) {
                s_hi = s;
                continue;
            }
            double m = p.domain.interior_margin(xc);
            if (m > cfg.boundary_epsilon) {
                s_lo = s;
                continue;
            }
            if (m > 0.0) {
                double tn = 0.0;
                try {
                    tn = tangent_field(p, ts, xc, cfg).norm();
                } catch (const SingularJacobianError&) {
                    trace.events.push_back({ts, "singular", "tangent singular at the boundary point"});
                }
                trace.states.push_back({ts, xc, rc, s * h_step, tn});
                k_hat = std::max(k_hat, tn / (xc.norm() + 1.0));
                trace.growth_constant_estimate = k_hat;
                trace.events.push_back({ts, "boundary", "boundary distance " + std::to_string(m)});
                return BoundaryApproach{ts, xc, rc, m};
            }
            s_hi = s;
        }
        return StepFailure{t, "boundary localization failed"};
    };

    while (true) {
        if (t >= 1.0) {
            ContinuationOutcome oc = classify_termination(trace.states.back(), p, cfg);
            trace.events.push_back({t, outcome_name(oc), ""});
            return finalize(oc);
        }
        if (accepted >= cfg.max_steps) {
            trace.events.push_back({t, "max-steps", ""});
            return finalize(StepFailure{t, "max_steps exceeded"});
        }
        if (++attempts > 50L * cfg.max_steps)
            return finalize(StepFailure{t, "attempt budget exceeded"});

        const double h_try = std::min(h, 1.0 - t);
        const bool to_end = (h_try >= 1.0 - t);
        const double t_new = to_end ? 1.0 : t + h_try;
        const bool at_floor = h_try <= cfg.min_step;

        // stalled step control: either finish by direct correction or report
        auto stall = [&](const std::string& why,
                         std::optional<double> singular_cond) -> ContinuationOutcome {
            if (auto oc = try_endgame())
                return *oc;
            if (singular_cond) {
                trace.events.push_back({t, "singular", why});
                return SingularJacobian{t, x, *singular_cond};
            }
            trace.events.push_back({t, "step-failure", why});
            return StepFailure{t, why};
        };

        detail::StageFailure sf;
        auto step = detail::dp5_step(p, t, x, a, h_try, cfg, &sf);
        if (!step) {
            if (at_floor)
                return finalize(stall(sf.reason + " at minimum step size", sf.singular_cond));
            h = std::max(0.25 * h_try, cfg.min_step);
            rejected_last = true;
            continue;
        }

        Vector x5 = std::move(step->first);
        double err_norm = step->second.norm();
        double tol_scale = cfg.step_abs_tol + cfg.step_rel_tol * std::max(x.norm(), x5.norm());
        double err_ratio = err_norm / tol_scale;
        if (err_ratio > 1.0) {
            if (at_floor)
                return finalize(stall("local error above tolerance at minimum step size",
                                      std::nullopt));
            double fac = std::max(0.1, 0.9 * std::pow(err_ratio, -0.2));
            h = std::max(h_try * fac, cfg.min_step);
            rejected_last = true;
            continue;
        }

        double margin_raw = p.domain.interior_margin(x5);
        if (margin_raw <= 0.0)
            return finalize(localize_boundary(h_try));

        Vector xc;
        double res_c;
        try {
            std::tie(xc, res_c) = detail::newton_correct_impl(p, t_new, x5, cfg);
        } catch (const CorrectorDivergenceError& e) {
            if (e.left_domain())
                return finalize(localize_boundary(h_try));
            if (at_floor)
                return finalize(stall(std::string("corrector failed at minimum step size: ") +
                                          e.what(),
                                      std::nullopt));
            h = std::max(0.5 * h_try, cfg.min_step);
            rejected_last = true;
            continue;
        } catch (const SingularJacobianError& e) {
            if (at_floor)
                return finalize(stall("singular jacobian in the corrector at minimum step size",
                                      e.condition()));
            h = std::max(0.5 * h_try, cfg.min_step);
            rejected_last = true;
            continue;
        } catch (const EvaluationError& e) {
            if (at_floor)
                return finalize(stall(std::string(e.what()) + " at minimum step size",
                                      std::nullopt));
            h = std::max(0.5 * h_try, cfg.min_step);
            rejected_last = true;
            continue;
        }

        if (t_new >= 1.0)  // terminal point: polish beyond the drift tolerance
            std::tie(xc, res_c) = detail::sharpen_zero(p, 1.0, xc, res_c, cfg);

        double margin_new = p.domain.interior_margin(xc);
        if (margin_new <= 0.0)
            return finalize(localize_boundary(h_try));
        if (margin_new <= cfg.boundary_epsilon) {
            double tn = 0.0;
            try {
                tn = tangent_field(p, t_new, xc, cfg).norm();
            } catch (const SingularJacobianError&) {
                trace.events.push_back({t_new, "singular", "tangent singular at the boundary point"});
            }
            trace.states.push_back({t_new, xc, res_c, h_try, tn});
            k_hat = std::max(k_hat, tn / (xc.norm() + 1.0));
            trace.growth_constant_estimate = k_hat;
            trace.events.push_back({t_new, "boundary", "boundary distance " + std::to_string(margin_new)});
            return finalize(BoundaryApproach{t_new, xc, res_c, margin_new});
        }

        // accepted
        Vector a_new;
        try {
            a_new = tangent_field(p, t_new, xc, cfg);
        } catch (const SingularJacobianError& e) {
            trace.events.push_back({t_new, "singular", "singular jacobian at an accepted point"});
            return finalize(SingularJacobian{t_new, xc, e.condition()});
        }

        t = t_new;
        x = std::move(xc);
        a = std::move(a_new);
        ++accepted;
        trace.states.push_back({t, x, res_c, h_try, a.norm()});
        k_hat = std::max(k_hat, a.norm() / (x.norm() + 1.0));
        trace.growth_constant_estimate = k_hat;

        if (x.norm() > divergence_norm) {
            trace.events.push_back({t, "divergence", "state norm " + std::to_string(x.norm())});
            return finalize(Divergence{t, x.norm()});
        }

        double e_ctl = std::max(err_ratio, 1e-16);
        double fac = 0.9 * std::pow(e_ctl, -0.17) * std::pow(err_prev, 0.04);
        fac = std::clamp(fac, 0.2, 5.0);
        if (rejected_last)
            fac = std::min(fac, 1.0);
        rejected_last = false;
        err_prev = std::max(err_ratio, 1e-4);
        h = std::clamp(h_try * fac, cfg.min_step, 0.1);

        // near-singular creep: when the condition estimate enters the warning
        // band and keeps deteriorating, refine the step before the rank test
        // can fail outright
        double cond_now = condition_estimate(p.eval_Fx(t, x));
        if (cond_now >= cfg.condition_max / 100.0 && cond_now > 4.0 * cond_prev) {
            h = std::max(std::min(h, 0.5 * h_try), cfg.min_step);
            if (!near_singular_noted) {
                trace.events.push_back(
                    {t, "near-singular", "condition estimate " + std::to_string(cond_now)});
                near_singular_noted = true;
            }
        }
        cond_prev = cond_now;
    }
}

}  // namespace davidenko

#endif
