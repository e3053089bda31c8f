#ifndef DAVIDENKO_CORE_HPP
#define DAVIDENKO_CORE_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace davidenko {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when a Jacobian fails the rank test; carries the condition estimate.
class SingularJacobianError : public std::runtime_error {
public:
    explicit SingularJacobianError(double condition)
        : std::runtime_error("jacobian condition estimate " + std::to_string(condition) +
                             " exceeds the configured maximum"),
          condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Thrown when the drift corrector exhausts its iteration budget or leaves the domain.
class CorrectorDivergenceError : public std::runtime_error {
public:
    explicit CorrectorDivergenceError(const std::string& msg, bool left_domain = false)
        : std::runtime_error(msg), left_domain_(left_domain) {}
    bool left_domain() const noexcept { return left_domain_; }

private:
    bool left_domain_;
};

class DomainViolationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an evaluator produces NaN/Inf or has the wrong shape at a use site.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }
inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite())
        throw EvaluationError(std::string(what) + " produced a non-finite value");
}

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite())
        throw EvaluationError(std::string(what) + " produced a non-finite value");
}

}  // namespace davidenko

#endif
