#ifndef DAVIDENKO_ORACLES_HPP
#define DAVIDENKO_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "davidenko/fd.hpp"
#include "davidenko/flow.hpp"
#include "davidenko/problem.hpp"

namespace davidenko {

namespace detail {

inline Vector unit_direction(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector u(dim);
    do {
        for (int i = 0; i < dim; ++i) u[i] = gauss(rng);
    } while (u.norm() == 0.0);
    return u / u.norm();
}

inline Vector region_center(const DomainSpec& region, int dim) {
    switch (region.kind()) {
        case DomainKind::OpenBall: return region.center();
        case DomainKind::OpenBox:  return 0.5 * (region.lo() + region.hi());
        default:                   return Vector::Zero(dim);
    }
}

// Uniform draw from the region interior. Unbounded regions are capped at the
// given radius; custom regions use rejection sampling inside that ball.
inline Vector sample_in_region(const DomainSpec& region, int dim, double cap_radius,
                               std::mt19937& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    switch (region.kind()) {
        case DomainKind::OpenBall: {
            Vector dir = unit_direction(dim, rng);
            double r = region.radius() * std::pow(unif(rng), 1.0 / dim);
            return region.center() + r * dir;
        }
        case DomainKind::OpenBox: {
            Vector x(dim);
            for (int i = 0; i < dim; ++i)
                x[i] = region.lo()[i] + unif(rng) * (region.hi()[i] - region.lo()[i]);
            return x;
        }
        case DomainKind::WholeSpace: {
            Vector dir = unit_direction(dim, rng);
            double r = cap_radius * std::pow(unif(rng), 1.0 / dim);
            return r * dir;
        }
        case DomainKind::Custom: {
            for (int attempt = 0; attempt < 1000; ++attempt) {
                Vector dir = unit_direction(dim, rng);
                double r = cap_radius * std::pow(unif(rng), 1.0 / dim);
                Vector x = r * dir;
                if (region.contains(x)) return x;
            }
            throw std::runtime_error("sample_in_region: custom region rejected all samples");
        }
    }
    return Vector::Zero(dim);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// brute-force zero finding (dim <= 3)

namespace detail {

inline double bisect_scalar(const VectorMap& g, double a, double b, double ga) {
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max({1.0, std::abs(a), std::abs(b)});
         ++it) {
        double mid = 0.5 * (a + b);
        Vector gm = g((Vector(1) << mid).finished());
        if (gm[0] == 0.0) return mid;
        if ((gm[0] > 0.0) == (ga > 0.0)) {
            a = mid;
            ga = gm[0];
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// damped Newton with finite-difference Jacobian and minimum-norm steps
inline std::optional<Vector> polish_zero(const VectorMap& g, Vector x) {
    for (int it = 0; it < 80; ++it) {
        Vector gv = g(x);
        if (!all_finite(gv)) return std::nullopt;
        double ng = gv.norm();
        if (ng <= 1e-15) break;
        Matrix jac = fd_jacobian(g, x, 1e-7 * (1.0 + x.norm()));
        if (jac.rows() > jac.cols()) return std::nullopt;
        Vector step;
        try {
            step = right_inverse_apply(jac, gv, 1e14);
        } catch (const SingularJacobianError&) {
            break;
        }
        double lambda = 1.0;
        bool moved = false;
        while (lambda >= 1e-4) {
            Vector xn = x - lambda * step;
            Vector gn = g(xn);
            if (all_finite(gn) && gn.norm() < ng) {
                x = xn;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved) break;
        if (lambda * step.norm() <= 1e-13 * (1.0 + x.norm())) break;
    }
    Vector gv = g(x);
    if (all_finite(gv) && gv.norm() <= 1e-8) return x;
    return std::nullopt;
}

}  // namespace detail

/**
 * Desk-scale zero finder: scan a grid over the box [lo,hi] at the given
 * resolution, then refine sign changes by bisection (1-D) and small-norm
 * local minima by damped Newton. Returned points satisfy ||g(x)|| <= 1e-8;
 * duplicates within one resolution are merged. Dimensions above 3 are
 * rejected.
 */
inline std::vector<Vector> brute_force_zero(const VectorMap& g, const Vector& lo, const Vector& hi,
                                            double resolution) {
    const int dim = static_cast<int>(lo.size());
    if (dim < 1 || dim > 3)
        throw DimensionError("brute_force_zero: dimension-too-large (supported: 1..3)");
    if (hi.size() != dim)
        throw DimensionError("brute_force_zero: lo/hi length mismatch");
    if (!((hi - lo).minCoeff() > 0.0))
        throw std::invalid_argument("brute_force_zero: box is empty");
    if (!(resolution > 0.0))
        throw std::invalid_argument("brute_force_zero: resolution must be positive");

    std::array<int, 3> counts = {1, 1, 1};
    long total = 1;
    for (int i = 0; i < dim; ++i) {
        counts[i] = std::max(2, static_cast<int>(std::ceil((hi[i] - lo[i]) / resolution)) + 1);
        total *= counts[i];
    }
    if (total > 4'000'000)
        throw std::invalid_argument("brute_force_zero: grid too large at this resolution");

    auto node = [&](const std::array<int, 3>& idx) {
        Vector x(dim);
        for (int i = 0; i < dim; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) / (counts[i] - 1);
        return x;
    };
    auto flat = [&](const std::array<int, 3>& idx) {
        long f = 0;
        for (int i = dim - 1; i >= 0; --i) f = f * counts[i] + idx[i];
        return f;
    };

    std::vector<double> norms(static_cast<size_t>(total));
    std::vector<double> first_component(dim == 1 ? static_cast<size_t>(total) : 0);
    std::array<int, 3> idx = {0, 0, 0};
    for (long f = 0; f < total; ++f) {
        Vector gv = g(node(idx));
        norms[static_cast<size_t>(f)] = all_finite(gv) ? gv.norm()
                                                       : std::numeric_limits<double>::infinity();
        if (dim == 1 && gv.size() == 1)
            first_component[static_cast<size_t>(f)] = gv[0];
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < counts[i]) break;
            idx[i] = 0;
        }
    }

    std::vector<Vector> candidates;

    // 1-D sign changes -> bisection
    if (dim == 1 && !first_component.empty()) {
        for (int i = 0; i + 1 < counts[0]; ++i) {
            double ga = first_component[i], gb = first_component[i + 1];
            if (!std::isfinite(ga) || !std::isfinite(gb)) continue;
            double xa = node({i, 0, 0})[0], xb = node({i + 1, 0, 0})[0];
            if (ga == 0.0) {
                candidates.push_back((Vector(1) << xa).finished());
            } else if (ga * gb < 0.0) {
                double root = detail::bisect_scalar(g, xa, xb, ga);
                candidates.push_back((Vector(1) << root).finished());
            }
        }
        if (first_component[counts[0] - 1] == 0.0)
            candidates.push_back((Vector(1) << node({counts[0] - 1, 0, 0})[0]).finished());
    }

    // local minima of ||g|| over axis neighbours -> Newton polish
    idx = {0, 0, 0};
    for (long f = 0; f < total; ++f) {
        double v = norms[static_cast<size_t>(f)];
        bool is_min = std::isfinite(v);
        for (int i = 0; is_min && i < dim; ++i) {
            for (int d : {-1, 1}) {
                std::array<int, 3> nb = idx;
                nb[i] += d;
                if (nb[i] < 0 || nb[i] >= counts[i]) continue;
                if (norms[static_cast<size_t>(flat(nb))] < v) {
                    is_min = false;
                    break;
                }
            }
        }
        if (is_min) {
            if (auto z = detail::polish_zero(g, node(idx)))
                candidates.push_back(*z);
        }
        for (int i = 0; i < dim; ++i) {
            if (++idx[i] < counts[i]) break;
            idx[i] = 0;
        }
    }

    // drop strays far outside the box, then merge duplicates within resolution
    std::erase_if(candidates, [&](const Vector& x) {
        for (int i = 0; i < dim; ++i)
            if (x[i] < lo[i] - resolution || x[i] > hi[i] + resolution) return true;
        return false;
    });
    auto lex_less = [](const Vector& a, const Vector& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (a[i] > b[i]) return false;
        }
        return false;
    };
    std::sort(candidates.begin(), candidates.end(), [&](const Vector& a, const Vector& b) {
        double na = g(a).norm(), nb = g(b).norm();
        if (na != nb) return na < nb;
        return lex_less(a, b);
    });
    std::vector<Vector> zeros;
    for (const auto& c : candidates) {
        bool dup = false;
        for (const auto& z : zeros)
            if ((z - c).norm() < resolution) {
                dup = true;
                break;
            }
        if (!dup) zeros.push_back(c);
    }
    std::sort(zeros.begin(), zeros.end(), lex_less);
    return zeros;
}

// ---------------------------------------------------------------------------
// hypothesis probes (sampled, never proven)

struct CoercivityShell {
    double t = 0.0;
    double radius = 0.0;
    double min_norm = 0.0;
};

struct CoercivityReport {
    std::vector<CoercivityShell> shells;
    bool pass = false;
    bool sampled_not_proven = true;
    std::uint32_t seed = 0;
};

/**
 * Sample min ||F(t,x)|| over spheres ||x|| = R for t in {0,.25,.5,.75,1}.
 * Passes iff, for every t, the shell minima are nondecreasing beyond the
 * smallest radius and the largest-radius minimum exceeds twice the smallest.
 */
inline CoercivityReport probe_coercivity(const HomotopyProblem& p, const std::vector<double>& radii,
                                         int samples_per_shell, std::uint32_t seed = 0) {
    if (radii.size() < 2 || !std::is_sorted(radii.begin(), radii.end()))
        throw std::invalid_argument("probe_coercivity: need at least two increasing radii");
    if (samples_per_shell < 1)
        throw std::invalid_argument("probe_coercivity: samples_per_shell must be >= 1");

    CoercivityReport rep;
    rep.seed = seed;
    std::mt19937 rng(seed);
    const std::vector<double> ts = {0.0, 0.25, 0.5, 0.75, 1.0};

    std::vector<std::vector<Vector>> directions(radii.size());
    for (size_t ri = 0; ri < radii.size(); ++ri)
        for (int s = 0; s < samples_per_shell; ++s)
            directions[ri].push_back(detail::unit_direction(p.dim_x, rng));

    rep.pass = true;
    for (double t : ts) {
        std::vector<double> minima;
        for (size_t ri = 0; ri < radii.size(); ++ri) {
            double m = std::numeric_limits<double>::infinity();
            for (const auto& dir : directions[ri]) {
                Vector fx = p.eval_F(t, radii[ri] * dir);
                if (all_finite(fx)) m = std::min(m, fx.norm());
            }
            rep.shells.push_back({t, radii[ri], m});
            minima.push_back(m);
        }
        for (size_t i = 1; i + 1 < minima.size(); ++i)
            if (minima[i + 1] < minima[i] - 1e-12) rep.pass = false;
        if (!(minima.back() > 2.0 * minima.front())) rep.pass = false;
    }
    return rep;
}

struct GrowthEstimate {
    double k_hat = 0.0;
    int singular_samples = 0;
    bool sampled_not_proven = true;
    std::uint32_t seed = 0;
};

/// max ||a(t,x)|| / (||x||+1) over explicit (t,x) samples. Singular samples
/// are counted, not fatal.
inline double growth_constant_over(const HomotopyProblem& p,
                                   const std::vector<std::pair<double, Vector>>& samples,
                                   const SolverConfig& cfg, int* singular_samples = nullptr) {
    double k = 0.0;
    int singular = 0;
    for (const auto& [t, x] : samples) {
        try {
            Vector a = tangent_field(p, t, x, cfg);
            k = std::max(k, a.norm() / (x.norm() + 1.0));
        } catch (const SingularJacobianError&) {
            ++singular;
        }
    }
    if (singular_samples) *singular_samples = singular;
    return k;
}

/**
 * Sampled estimate of the linear-growth constant of the tangent field over a
 * region. The first sample is the region center at t=0; the rest are uniform
 * draws (unbounded regions are capped at radius 10).
 */
inline GrowthEstimate estimate_growth_constant(const HomotopyProblem& p, const DomainSpec& region,
                                               int samples, const SolverConfig& cfg = {},
                                               std::uint32_t seed = 0) {
    if (samples < 1)
        throw std::invalid_argument("estimate_growth_constant: samples must be >= 1");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<double, Vector>> pts;
    pts.reserve(static_cast<size_t>(samples));
    pts.emplace_back(0.0, detail::region_center(region, p.dim_x));
    for (int i = 1; i < samples; ++i) {
        double t = unif(rng);
        pts.emplace_back(t, detail::sample_in_region(region, p.dim_x, 10.0, rng));
    }
    GrowthEstimate est;
    est.seed = seed;
    est.k_hat = growth_constant_over(p, pts, cfg, &est.singular_samples);
    return est;
}

/**
 * Max relative disagreement between the analytic derivatives and central
 * differences over sampled (t,x). Requires analytic derivative mode.
 */
inline double compare_jacobian(const HomotopyProblem& p, int samples, const SolverConfig& cfg = {},
                               std::uint32_t seed = 0) {
    if (p.derivative_mode != DerivativeMode::Analytic)
        throw std::invalid_argument("compare_jacobian: problem does not carry analytic derivatives");
    if (samples < 1)
        throw std::invalid_argument("compare_jacobian: samples must be >= 1");

    std::mt19937 rng(seed);
    const std::vector<double> ts = {0.0, 0.25, 0.5, 0.75, 1.0};
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Vector x = detail::sample_in_region(p.domain, p.dim_x, 2.0, rng);
        double t = ts[static_cast<size_t>(i) % ts.size()];
        double hx = cfg.fd_step * (1.0 + x.norm());

        auto slice = [&](const Vector& z) { return p.eval_F(t, z); };
        Matrix fd_x = fd_jacobian(slice, x, hx);
        Matrix an_x = p.eval_Fx(t, x);
        worst = std::max(worst, (an_x - fd_x).norm() / (1.0 + an_x.norm()));

        Vector fd_t = fd_time_derivative(p.eval_F, t, x, cfg.fd_step);
        Vector an_t = p.eval_Ft(t, x);
        worst = std::max(worst, (an_t - fd_t).norm() / (1.0 + an_t.norm()));
    }
    return worst;
}

}  // namespace davidenko

#endif
