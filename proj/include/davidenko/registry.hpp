#ifndef DAVIDENKO_REGISTRY_HPP
#define DAVIDENKO_REGISTRY_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "davidenko/frontends.hpp"
#include "davidenko/io.hpp"
#include "davidenko/oracles.hpp"

namespace davidenko {

enum class ProblemKind { FixedPoint, Inverse, RawHomotopy };
enum class ExpectedOutcome { InteriorZero, BoundaryApproach, Singular };

inline const char* kind_label(ProblemKind k) {
    switch (k) {
        case ProblemKind::FixedPoint: return "fixed-point";
        case ProblemKind::Inverse:    return "inverse";
        default:                      return "raw-homotopy";
    }
}

inline const char* expected_label(ExpectedOutcome e) {
    switch (e) {
        case ExpectedOutcome::InteriorZero:     return "interior_zero";
        case ExpectedOutcome::BoundaryApproach: return "boundary_approach";
        default:                                return "singular";
    }
}

struct FixedPointCase {
    FixedPointProblem problem;
};
struct InverseCase {
    InverseFunctionProblem problem;
};
struct RawCase {
    HomotopyProblem problem;
    Vector x0;
};
using RegisteredProblem = std::variant<FixedPointCase, InverseCase, RawCase>;

struct RegistryEntry {
    std::string name;
    ProblemKind kind;
    std::function<RegisteredProblem()> build;
    std::optional<ExpectedOutcome> expected;
};

// ---------------------------------------------------------------------------
// the built-in corpus

namespace corpus {

inline Matrix rotation2d(double theta) {
    Matrix r(2, 2);
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

inline FixedPointProblem cos_fixed_point() {
    FixedPointProblem fp;
    fp.dim = 1;
    fp.eval_f = [](const Vector& x) { return (Vector(1) << std::cos(x[0])).finished(); };
    fp.eval_fprime = [](const Vector& x) { return (Matrix(1, 1) << -std::sin(x[0])).finished(); };
    fp.domain = DomainSpec::whole_space();
    return fp;
}

inline FixedPointProblem escape_unit_ball() {
    FixedPointProblem fp;
    fp.dim = 1;
    fp.eval_f = [](const Vector& x) { return (Vector(1) << x[0] + 0.5).finished(); };
    fp.eval_fprime = [](const Vector&) { return (Matrix(1, 1) << 1.0).finished(); };
    fp.domain = DomainSpec::open_ball(Vector::Zero(1), 1.0);
    return fp;
}

inline InverseFunctionProblem cubic_inverse(double y = 2.0) {
    InverseFunctionProblem ip;
    ip.dim = 1;
    ip.eval_f = [](const Vector& x) {
        return (Vector(1) << x[0] * x[0] * x[0] + x[0]).finished();
    };
    ip.eval_fprime = [](const Vector& x) {
        return (Matrix(1, 1) << 3.0 * x[0] * x[0] + 1.0).finished();
    };
    ip.target_y = (Vector(1) << y).finished();
    return ip;
}

inline InverseFunctionProblem linear_inverse_2d() {
    InverseFunctionProblem ip;
    ip.dim = 2;
    ip.eval_f = [](const Vector& x) { return (Vector(2) << 2.0 * x[0], 4.0 * x[1]).finished(); };
    ip.eval_fprime = [](const Vector&) {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 2.0;
        a(1, 1) = 4.0;
        return a;
    };
    ip.target_y = (Vector(2) << 2.0, 8.0).finished();
    return ip;
}

// f(x) = x^2 + 1/4: the fixed-point equation has the double root x = 1/2,
// so the homotopy Jacobian degenerates exactly at t = 1.
inline FixedPointProblem double_root_stress() {
    FixedPointProblem fp;
    fp.dim = 1;
    fp.eval_f = [](const Vector& x) { return (Vector(1) << x[0] * x[0] + 0.25).finished(); };
    fp.eval_fprime = [](const Vector& x) { return (Matrix(1, 1) << 2.0 * x[0]).finished(); };
    fp.domain = DomainSpec::whole_space();
    return fp;
}

// negative entry: the claimed derivative is wrong everywhere except at the
// origin, so pre-flight validation at x0 = 0 passes while the sampled
// jacobian comparison must flag it
inline FixedPointProblem bad_jacobian() {
    FixedPointProblem fp;
    fp.dim = 1;
    fp.eval_f = [](const Vector& x) { return (Vector(1) << std::cos(x[0])).finished(); };
    fp.eval_fprime = [](const Vector& x) {
        return (Matrix(1, 1) << -2.0 * std::sin(x[0])).finished();
    };
    fp.domain = DomainSpec::whole_space();
    return fp;
}

inline FixedPointProblem spiral_2d() {
    FixedPointProblem fp;
    fp.dim = 2;
    Matrix r = 0.5 * rotation2d(1.0);
    Vector c = (Vector(2) << 1.0, 0.5).finished();
    fp.eval_f = [r, c](const Vector& x) -> Vector { return r * x + c; };
    fp.eval_fprime = [r](const Vector&) -> Matrix { return r; };
    fp.domain = DomainSpec::whole_space();
    return fp;
}

inline FixedPointProblem box_escape_2d() {
    FixedPointProblem fp;
    fp.dim = 2;
    Vector shift = (Vector(2) << 0.3, 0.4).finished();
    fp.eval_f = [shift](const Vector& x) -> Vector { return x + shift; };
    fp.eval_fprime = [](const Vector&) -> Matrix { return Matrix::Identity(2, 2); };
    fp.domain = DomainSpec::open_box((Vector(2) << -1.0, -1.0).finished(),
                                     (Vector(2) << 1.0, 1.0).finished());
    return fp;
}

}  // namespace corpus

inline const std::vector<RegistryEntry>& default_registry() {
    static const std::vector<RegistryEntry> entries = [] {
        std::vector<RegistryEntry> v;
        v.push_back({"bad-jacobian", ProblemKind::FixedPoint,
                     [] { return RegisteredProblem{FixedPointCase{corpus::bad_jacobian()}}; },
                     ExpectedOutcome::InteriorZero});
        v.push_back({"box-escape-2d", ProblemKind::FixedPoint,
                     [] { return RegisteredProblem{FixedPointCase{corpus::box_escape_2d()}}; },
                     ExpectedOutcome::BoundaryApproach});
        v.push_back({"cos-fixed-point", ProblemKind::FixedPoint,
                     [] { return RegisteredProblem{FixedPointCase{corpus::cos_fixed_point()}}; },
                     ExpectedOutcome::InteriorZero});
        v.push_back({"cubic-inverse", ProblemKind::Inverse,
                     [] { return RegisteredProblem{InverseCase{corpus::cubic_inverse()}}; },
                     ExpectedOutcome::InteriorZero});
        v.push_back({"double-root-stress", ProblemKind::FixedPoint,
                     [] { return RegisteredProblem{FixedPointCase{corpus::double_root_stress()}}; },
                     ExpectedOutcome::InteriorZero});
        v.push_back({"escape-unit-ball", ProblemKind::FixedPoint,
                     [] { return RegisteredProblem{FixedPointCase{corpus::escape_unit_ball()}}; },
                     ExpectedOutcome::BoundaryApproach});
        v.push_back({"linear-inverse-2d", ProblemKind::Inverse,
                     [] { return RegisteredProblem{InverseCase{corpus::linear_inverse_2d()}}; },
                     ExpectedOutcome::InteriorZero});
        v.push_back({"spiral-2d", ProblemKind::FixedPoint,
                     [] { return RegisteredProblem{FixedPointCase{corpus::spiral_2d()}}; },
                     ExpectedOutcome::InteriorZero});
        return v;
    }();
    return entries;
}

inline const RegistryEntry* find_problem(const std::string& name) {
    for (const auto& e : default_registry())
        if (e.name == name) return &e;
    return nullptr;
}

// ---------------------------------------------------------------------------
// running an entry

struct RunResult {
    std::string name;
    std::string kind;
    std::string outcome_label;
    bool matched = false;
    nlohmann::json summary;
    Trace trace;
};

namespace detail {

inline bool label_is_success(const std::string& label) {
    return label == "fixed" || label == "boundary_eigenpair" || label == "inverse_solved" ||
           label == "interior_zero" || label == "boundary_approach";
}

inline bool label_matches(const std::string& label, ExpectedOutcome expected) {
    switch (expected) {
        case ExpectedOutcome::InteriorZero:
            return label == "fixed" || label == "inverse_solved" || label == "interior_zero";
        case ExpectedOutcome::BoundaryApproach:
            return label == "boundary_eigenpair" || label == "boundary_approach";
        case ExpectedOutcome::Singular:
            return label == "singular_jacobian" || label == "failed_singular_jacobian";
    }
    return false;
}

}  // namespace detail

inline RunResult run_registry_entry(const RegistryEntry& entry, const SolverConfig& cfg) {
    RunResult rr;
    rr.name = entry.name;
    rr.kind = kind_label(entry.kind);

    RegisteredProblem built = entry.build();
    nlohmann::json outcome_json;

    if (const auto* fc = std::get_if<FixedPointCase>(&built)) {
        FixedPointResult res = solve_fixed_point(fc->problem, cfg);
        rr.trace = res.trace;
        outcome_json = to_json(res);
        if (res.is_fixed())
            rr.outcome_label = "fixed";
        else if (res.is_eigenpair())
            rr.outcome_label = "boundary_eigenpair";
        else
            rr.outcome_label = std::string("failed_") + outcome_name(res.failure().outcome);
    } else if (const auto* ic = std::get_if<InverseCase>(&built)) {
        try {
            InverseResult res = solve_inverse(ic->problem, cfg);
            rr.trace = res.trace;
            rr.outcome_label = "inverse_solved";
            outcome_json["type"] = "inverse_solved";
            outcome_json["psi"] = to_json(res.psi);
            outcome_json["residual"] = res.residual;
        } catch (const InverseMapError& e) {
            rr.trace = e.trace();
            rr.outcome_label = std::string("failed_") + outcome_name(e.outcome());
            outcome_json["type"] = "failed";
            outcome_json["outcome"] = to_json(e.outcome());
        }
    } else {
        const auto& rc = std::get<RawCase>(built);
        auto [trace, outcome] = integrate(rc.problem, rc.x0, cfg);
        rr.trace = std::move(trace);
        rr.outcome_label = outcome_name(outcome);
        outcome_json = to_json(outcome);
    }

    rr.matched = entry.expected ? detail::label_matches(rr.outcome_label, *entry.expected)
                                : detail::label_is_success(rr.outcome_label);

    nlohmann::json s;
    s["problem"] = rr.name;
    s["kind"] = rr.kind;
    s["expected"] = entry.expected ? nlohmann::json(expected_label(*entry.expected))
                                   : nlohmann::json(nullptr);
    s["outcome"] = std::move(outcome_json);
    s["matched_expectation"] = rr.matched;
    s["steps"] = rr.trace.states.size();
    s["growth_constant_estimate"] = rr.trace.growth_constant_estimate;
    nlohmann::json evs = nlohmann::json::array();
    for (const auto& ev : rr.trace.events) {
        nlohmann::json e;
        e["t"] = ev.t;
        e["kind"] = ev.kind;
        e["detail"] = ev.detail;
        evs.push_back(std::move(e));
    }
    s["events"] = std::move(evs);
    rr.summary = std::move(s);
    return rr;
}

// ---------------------------------------------------------------------------
// hypothesis check bundle

struct CheckReport {
    std::string name;
    ValidationReport validation;
    std::optional<double> jacobian_error;          // analytic problems only
    std::optional<CoercivityReport> coercivity;    // unbounded domains only
    GrowthEstimate growth;
    bool ok() const {
        return validation.clean() && (!jacobian_error || *jacobian_error <= 1e-4);
    }
};

inline CheckReport check_problem(const RegistryEntry& entry, const SolverConfig& cfg) {
    CheckReport rep;
    rep.name = entry.name;

    RegisteredProblem built = entry.build();
    HomotopyProblem h;
    Vector x0;
    if (const auto* fc = std::get_if<FixedPointCase>(&built)) {
        h = make_fixed_point_homotopy(fc->problem, cfg.fd_step);
        x0 = Vector::Zero(fc->problem.dim);
    } else if (const auto* ic = std::get_if<InverseCase>(&built)) {
        h = make_inverse_homotopy(ic->problem);
        x0 = Vector::Zero(ic->problem.dim);
    } else {
        const auto& rc = std::get<RawCase>(built);
        h = rc.problem;
        x0 = rc.x0;
    }

    rep.validation = validate_problem(h, x0, cfg);
    if (h.derivative_mode == DerivativeMode::Analytic)
        rep.jacobian_error = compare_jacobian(h, 40, cfg, /*seed=*/0);
    if (!h.domain.bounded())
        rep.coercivity = probe_coercivity(h, {1.0, 2.0, 4.0, 8.0}, 64, /*seed=*/0);
    rep.growth = estimate_growth_constant(h, h.domain, 200, cfg, /*seed=*/0);
    return rep;
}

// ---------------------------------------------------------------------------
// uniform boundary samplers for ball and box domains

inline std::vector<Vector> sample_boundary(const DomainSpec& domain, int n,
                                           std::uint32_t seed = 0) {
    if (n < 1)
        throw std::invalid_argument("sample_boundary: n must be >= 1");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Vector> out;
    out.reserve(static_cast<size_t>(n));

    if (domain.kind() == DomainKind::OpenBall) {
        int dim = static_cast<int>(domain.center().size());
        for (int i = 0; i < n; ++i)
            out.push_back(domain.center() + domain.radius() * detail::unit_direction(dim, rng));
        return out;
    }
    if (domain.kind() == DomainKind::OpenBox) {
        const Vector& lo = domain.lo();
        const Vector& hi = domain.hi();
        int dim = static_cast<int>(lo.size());
        // area-weighted choice of face, then uniform on the face
        std::vector<double> weights(static_cast<size_t>(dim));
        double total = 0.0;
        for (int i = 0; i < dim; ++i) {
            double area = 1.0;
            for (int j = 0; j < dim; ++j)
                if (j != i) area *= hi[j] - lo[j];
            weights[static_cast<size_t>(i)] = 2.0 * area;
            total += weights[static_cast<size_t>(i)];
        }
        for (int s = 0; s < n; ++s) {
            double pick = unif(rng) * total;
            int face = 0;
            while (face + 1 < dim && pick > weights[static_cast<size_t>(face)]) {
                pick -= weights[static_cast<size_t>(face)];
                ++face;
            }
            Vector x(dim);
            for (int j = 0; j < dim; ++j)
                x[j] = (j == face) ? 0.0 : lo[j] + unif(rng) * (hi[j] - lo[j]);
            x[face] = unif(rng) < 0.5 ? lo[face] : hi[face];
            out.push_back(std::move(x));
        }
        return out;
    }
    throw DomainViolationError("sample_boundary: only ball and box domains have samplers");
}

}  // namespace davidenko

#endif
