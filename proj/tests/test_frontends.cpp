#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace davidenko;
using test_helpers::bisect_root;
using test_helpers::scalar_fixed_point;
using test_helpers::vec1;
using test_helpers::vec2;

namespace {

const SolverConfig kCfg{};

InverseFunctionProblem cubic(double target) {
    InverseFunctionProblem ip;
    ip.dim = 1;
    ip.eval_f = [](const Vector& x) { return vec1(x[0] * x[0] * x[0] + x[0]); };
    ip.eval_fprime = [](const Vector& x) {
        Matrix m(1, 1);
        m << 3.0 * x[0] * x[0] + 1.0;
        return m;
    };
    ip.target_y = vec1(target);
    return ip;
}

}  // namespace

TEST_CASE("solve_fixed_point finds the cos fixed point") {
    auto fp = scalar_fixed_point([](double x) { return std::cos(x); },
                                 [](double x) { return -std::sin(x); },
                                 DomainSpec::whole_space());
    auto res = solve_fixed_point(fp, kCfg);
    REQUIRE(res.is_fixed());
    double oracle = bisect_root([](double x) { return x - std::cos(x); }, 0.0, 1.0);
    CHECK(res.fixed().x_hat[0] == Catch::Approx(oracle).margin(1e-8));
    CHECK(res.fixed().residual <= 1e-8);
    // soundness recomputed from scratch
    CHECK(std::abs(std::cos(res.fixed().x_hat[0]) - res.fixed().x_hat[0]) <= kCfg.drift_tol);
    CHECK(!res.boundary_report);
}

TEST_CASE("solve_fixed_point on a constant map returns the constant") {
    FixedPointProblem fp;
    fp.dim = 2;
    Vector c = vec2(0.3, -0.2);
    fp.eval_f = [c](const Vector&) { return c; };
    fp.eval_fprime = [](const Vector&) { return Matrix::Zero(2, 2); };
    fp.domain = DomainSpec::whole_space();
    auto res = solve_fixed_point(fp, kCfg);
    REQUIRE(res.is_fixed());
    CHECK((res.fixed().x_hat - c).norm() <= 1e-9);
}

TEST_CASE("escaping map yields the boundary eigenpair with its certificate") {
    auto fp = scalar_fixed_point([](double x) { return x + 0.5; }, [](double) { return 1.0; },
                                 DomainSpec::open_ball(vec1(0.0), 1.0));
    auto res = solve_fixed_point(fp, kCfg);
    REQUIRE(res.is_eigenpair());
    const auto& ep = res.eigenpair();
    CHECK(ep.tau == Catch::Approx(2.0 / 3.0).margin(1e-3));
    CHECK(ep.xi[0] == Catch::Approx(1.0).margin(1e-3));
    // f(1) = 1.5 = (1/tau) * 1
    CHECK(ep.xi[0] + 0.5 == Catch::Approx(ep.xi[0] / ep.tau).margin(1e-5));
    CHECK(ep.eigen_residual <= 10.0 * kCfg.drift_tol * (1.0 + 1.0 / ep.tau));
    // eigen identity recomputed: ||tau f(xi) - xi||
    CHECK(std::abs(ep.tau * (ep.xi[0] + 0.5) - ep.xi[0]) <= 10.0 * kCfg.drift_tol);

    // tau < 1: the boundary-condition report is attached and all four fail
    REQUIRE(res.boundary_report.has_value());
    REQUIRE(res.boundary_report->points.size() == 1);
    const auto& pt = res.boundary_report->points.front();
    CHECK(!pt.cond1);
    CHECK(!pt.cond2);
    CHECK(!pt.cond3);
    CHECK(!pt.cond4);
    CHECK(!res.boundary_report->all_points_satisfy_some);
}

TEST_CASE("fixed-point failures carry the flow outcome") {
    auto fp = scalar_fixed_point([](double x) { return x + 1.0; }, [](double) { return 1.0; },
                                 DomainSpec::whole_space());
    auto res = solve_fixed_point(fp, kCfg);
    REQUIRE(res.is_failure());
    CHECK(std::holds_alternative<SingularJacobian>(res.failure().outcome));
}

TEST_CASE("inverse_map evaluates the cubic inverse") {
    Vector psi = inverse_map(cubic(2.0), kCfg);
    CHECK(psi[0] == Catch::Approx(1.0).margin(1e-8));  // f(1) = 2, f strictly increasing
    auto res = solve_inverse(cubic(2.0), kCfg);
    CHECK(res.residual <= kCfg.drift_tol);
}

TEST_CASE("inverse_map at y = f(0) is the stationary trajectory") {
    Vector psi = inverse_map(cubic(0.0), kCfg);  // f(0) = 0
    CHECK(psi.norm() <= 1e-14);
}

TEST_CASE("inverse_map solves a diagonal linear system") {
    InverseFunctionProblem ip;
    ip.dim = 2;
    ip.eval_f = [](const Vector& x) { return vec2(2.0 * x[0], 4.0 * x[1]); };
    ip.eval_fprime = [](const Vector&) {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 2.0;
        a(1, 1) = 4.0;
        return a;
    };
    ip.target_y = vec2(2.0, 8.0);
    Vector psi = inverse_map(ip, kCfg);
    CHECK(psi[0] == Catch::Approx(1.0).margin(1e-9));
    CHECK(psi[1] == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("inverse soundness over many targets") {
    auto ip = cubic(0.0);
    for (double y : {-7.5, -2.0, -0.3, 0.4, 1.7, 5.0, 9.9}) {
        ip.target_y = vec1(y);
        Vector psi = inverse_map(ip, kCfg);
        double f = psi[0] * psi[0] * psi[0] + psi[0];
        CHECK(std::abs(f - y) <= kCfg.drift_tol);
    }
}

TEST_CASE("sampled Lipschitz continuity of the inverse map") {
    auto ip = cubic(0.0);
    for (double y : {-6.0, -1.0, 0.5, 3.0, 8.0}) {
        ip.target_y = vec1(y);
        Vector a = inverse_map(ip, kCfg);
        ip.target_y = vec1(y + 1e-3);
        Vector b = inverse_map(ip, kCfg);
        CHECK((a - b).norm() <= 1e-2);
    }
}

TEST_CASE("inverse failure carries outcome and partial trace") {
    InverseFunctionProblem ip;
    ip.dim = 1;
    ip.eval_f = [](const Vector& x) { return vec1(x[0] * x[0]); };
    ip.eval_fprime = [](const Vector& x) {
        Matrix m(1, 1);
        m << 2.0 * x[0];
        return m;
    };
    ip.target_y = vec1(1.0);
    // f'(0) = 0: the flow cannot even leave the starting point
    try {
        inverse_map(ip, kCfg);
        FAIL("expected InverseMapError");
    } catch (const InverseMapError& e) {
        CHECK(std::holds_alternative<SingularJacobian>(e.outcome()));
        CHECK(e.trace().states.empty());  // failed before the first state
    }
}

// --- check_boundary_conditions ----------------------------------------------

TEST_CASE("boundary conditions on the unit interval boundary") {
    auto dom = DomainSpec::open_ball(vec1(0.0), 1.0);

    auto fp_small = scalar_fixed_point([](double) { return 0.5; }, [](double) { return 0.0; }, dom);
    auto rep = check_boundary_conditions(fp_small, {vec1(1.0)}, kCfg);
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].cond1);  // 0.5 <= 1
    CHECK(rep.all_points_satisfy_some);

    auto fp_big = scalar_fixed_point([](double) { return 1.5; }, [](double) { return 0.0; }, dom);
    rep = check_boundary_conditions(fp_big, {vec1(1.0)}, kCfg);
    CHECK(!rep.points[0].cond1);  // 1.5 > 1
    CHECK(!rep.points[0].cond2);  // 1.5 > 0.5
    CHECK(!rep.points[0].cond3);  // 1.5 > sqrt(1.25)
    CHECK(!rep.points[0].cond4);  // 1.5 > max(0.5, 1)
    CHECK(!rep.all_points_satisfy_some);
}

TEST_CASE("boundary conditions on a 2d rotation sample") {
    FixedPointProblem fp;
    fp.dim = 2;
    fp.eval_f = [](const Vector& x) { return vec2(x[1], x[0]); };  // swap: (0,1) -> (1,0)
    fp.eval_fprime = [](const Vector&) {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        return m;
    };
    fp.domain = DomainSpec::open_ball(vec2(0.0, 0.0), 1.0);
    auto rep = check_boundary_conditions(fp, {vec2(0.0, 1.0)}, kCfg);
    CHECK(rep.points[0].cond1);  // ||f|| = 1 <= ||x|| = 1
}

TEST_CASE("off-boundary samples are rejected") {
    auto fp = scalar_fixed_point([](double) { return 0.5; }, [](double) { return 0.0; },
                                 DomainSpec::open_ball(vec1(0.0), 1.0));
    CHECK_THROWS_AS(check_boundary_conditions(fp, {vec1(0.5)}, kCfg), DomainViolationError);
}
