#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lsdev {

/// Argument outside the admissible region of a rate function or model.
/// `bound()` names the violated inequality, e.g. "a < 1".
class DomainError : public std::domain_error {
public:
    DomainError(std::string bound, const std::string& what)
        : std::domain_error(what + " (violated: " + bound + ")"), bound_(std::move(bound)) {}

    const std::string& bound() const noexcept { return bound_; }

private:
    std::string bound_;
};

/// A constrained search found no feasible point.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A moment generating function is infinite at the requested argument.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Hypothesis E exp(lambda nu) <= exp(alpha lambda m) fails at a generation.
class MgfConditionError : public std::domain_error {
public:
    MgfConditionError(std::size_t generation, const std::string& what)
        : std::domain_error(what), generation_(generation) {}

    std::size_t generation() const noexcept { return generation_; }

private:
    std::size_t generation_;
};

/// A particle system outgrew its configured cap. Carries the time reached.
class TruncationError : public std::runtime_error {
public:
    TruncationError(double time_reached, const std::string& what)
        : std::runtime_error(what), time_reached_(time_reached) {}

    double time_reached() const noexcept { return time_reached_; }

private:
    double time_reached_;
};

/// Every replica of a log-estimator returned zero.
class NoDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A probe was refused because the predicted probability is unobservable
/// at the requested replica budget.
class UnobservableError : public std::runtime_error {
public:
    UnobservableError(double predicted, const std::string& what)
        : std::runtime_error(what), predicted_(predicted) {}

    double predicted() const noexcept { return predicted_; }

private:
    double predicted_;
};

/// A nested partition schedule left a level without admissible boxes.
class EmptyLevelError : public std::runtime_error {
public:
    EmptyLevelError(int level, const std::string& what) : std::runtime_error(what), level_(level) {}

    int level() const noexcept { return level_; }

private:
    int level_;
};

/// A family of shifted sets failed to cover its target. Carries a witness.
class CoverageError : public std::runtime_error {
public:
    CoverageError(int row, int col, const std::string& what) : std::runtime_error(what), row_(row), col_(col) {}

    int row() const noexcept { return row_; }
    int col() const noexcept { return col_; }

private:
    int row_;
    int col_;
};

}  // namespace lsdev
