#ifndef DAVIDENKO_CONFIG_HPP
#define DAVIDENKO_CONFIG_HPP

#include <stdexcept>

namespace davidenko {

/// All tolerances, step bounds and thresholds of the solver in one place.
struct SolverConfig {
    double step_rel_tol = 1e-8;       // relative per-step integration error
    double step_abs_tol = 1e-10;      // absolute per-step integration error
    double drift_tol = 1e-9;          // max allowed ||F(t,x)|| after correction
    int corrector_max_iters = 10;     // Newton budget per corrected point
    double boundary_epsilon = 1e-6;   // boundary-approach detection distance
    double condition_max = 1e10;      // rank-test cutoff for the right inverse
    int max_steps = 100000;           // accepted-step budget per run
    double min_step = 1e-12;          // smallest admissible step size
    double zero_radius = 1e-6;        // residual radius accepted as a zero at t=1
    double fd_step = 1e-6;            // base finite-difference step

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0))
                throw std::invalid_argument(std::string("SolverConfig: ") + name +
                                            " must be strictly positive");
        };
        positive(step_rel_tol, "step_rel_tol");
        positive(step_abs_tol, "step_abs_tol");
        positive(drift_tol, "drift_tol");
        positive(boundary_epsilon, "boundary_epsilon");
        positive(condition_max, "condition_max");
        positive(min_step, "min_step");
        positive(zero_radius, "zero_radius");
        positive(fd_step, "fd_step");
        if (!(min_step < 1.0))
            throw std::invalid_argument("SolverConfig: min_step must be < 1");
        if (corrector_max_iters < 1)
            throw std::invalid_argument("SolverConfig: corrector_max_iters must be >= 1");
        if (max_steps < 1)
            throw std::invalid_argument("SolverConfig: max_steps must be >= 1");
    }
};

}  // namespace davidenko

#endif
