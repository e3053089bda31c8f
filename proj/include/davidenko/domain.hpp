#ifndef DAVIDENKO_DOMAIN_HPP
#define DAVIDENKO_DOMAIN_HPP

#include <functional>
#include <limits>
#include <utility>

#include "davidenko/core.hpp"

namespace davidenko {

enum class DomainKind { WholeSpace, OpenBall, OpenBox, Custom };

/**
 * Membership and boundary-distance semantics for the open set the continuation
 * runs in. For balls and boxes boundary_distance is the exact Euclidean
 * distance to the boundary on either side; custom domains supply their own
 * estimate (a lower bound is tolerated but blurs boundary classification).
 */
class DomainSpec {
public:
    using ContainsFn = std::function<bool(const Vector&)>;
    using DistanceFn = std::function<double(const Vector&)>;

    static DomainSpec whole_space() {
        DomainSpec d;
        d.kind_ = DomainKind::WholeSpace;
        return d;
    }

    static DomainSpec open_ball(Vector center, double radius) {
        if (!(radius > 0.0))
            throw DomainViolationError("open_ball: radius must be positive");
        require_finite(center, "open_ball center");
        DomainSpec d;
        d.kind_ = DomainKind::OpenBall;
        d.center_ = std::move(center);
        d.radius_ = radius;
        return d;
    }

    static DomainSpec open_box(Vector lo, Vector hi) {
        if (lo.size() != hi.size())
            throw DimensionError("open_box: lo and hi must have equal length");
        if (!((hi - lo).minCoeff() > 0.0))
            throw DomainViolationError("open_box: need lo < hi componentwise");
        DomainSpec d;
        d.kind_ = DomainKind::OpenBox;
        d.lo_ = std::move(lo);
        d.hi_ = std::move(hi);
        return d;
    }

    static DomainSpec custom(ContainsFn contains, DistanceFn boundary_distance) {
        if (!contains || !boundary_distance)
            throw DomainViolationError("custom domain: both callbacks are required");
        DomainSpec d;
        d.kind_ = DomainKind::Custom;
        d.contains_ = std::move(contains);
        d.distance_ = std::move(boundary_distance);
        return d;
    }

    DomainKind kind() const noexcept { return kind_; }

    /// True iff the domain is a bounded set (ball or box).
    bool bounded() const noexcept {
        return kind_ == DomainKind::OpenBall || kind_ == DomainKind::OpenBox;
    }

    bool contains(const Vector& x) const {
        switch (kind_) {
            case DomainKind::WholeSpace: return true;
            case DomainKind::OpenBall:   return (x - center_).norm() < radius_;
            case DomainKind::OpenBox:
                return (x.array() > lo_.array()).all() && (x.array() < hi_.array()).all();
            case DomainKind::Custom:     return contains_(x);
        }
        return false;
    }

    /// Euclidean distance to the topological boundary (+inf for the whole space).
    double boundary_distance(const Vector& x) const {
        switch (kind_) {
            case DomainKind::WholeSpace:
                return std::numeric_limits<double>::infinity();
            case DomainKind::OpenBall:
                return std::abs(radius_ - (x - center_).norm());
            case DomainKind::OpenBox: {
                if ((x.array() >= lo_.array()).all() && (x.array() <= hi_.array()).all()) {
                    // inside the closure: nearest face along one coordinate
                    double m = std::numeric_limits<double>::infinity();
                    for (Eigen::Index i = 0; i < x.size(); ++i)
                        m = std::min({m, x[i] - lo_[i], hi_[i] - x[i]});
                    return m;
                }
                // outside: distance to the closed box equals distance to its boundary
                Vector excess = (lo_ - x).cwiseMax(0.0).cwiseMax(x - hi_);
                return excess.norm();
            }
            case DomainKind::Custom:
                return distance_(x);
        }
        return 0.0;
    }

    /// Signed margin: +boundary_distance inside, -boundary_distance outside.
    double interior_margin(const Vector& x) const {
        double d = boundary_distance(x);
        return contains(x) ? d : -d;
    }

    // geometry accessors (ball/box only)
    const Vector& center() const { return center_; }
    double radius() const { return radius_; }
    const Vector& lo() const { return lo_; }
    const Vector& hi() const { return hi_; }

private:
    DomainSpec() = default;

    DomainKind kind_ = DomainKind::WholeSpace;
    Vector center_, lo_, hi_;
    double radius_ = 0.0;
    ContainsFn contains_;
    DistanceFn distance_;
};

}  // namespace davidenko

#endif
