#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtt {

/// Argument outside the mathematical domain of an operation (bad digit, x outside [0,1), p <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Floating-point failure: non-finite samples, SVD non-convergence.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or parsed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A full tensor would exceed the configured element budget.
class BudgetError : public std::length_error {
public:
    BudgetError(std::size_t requested, std::size_t budget)
        : std::length_error("element budget exceeded: " + std::to_string(requested) + " > " +
                            std::to_string(budget)),
          requested_(requested), budget_(budget) {}

    std::size_t requested() const noexcept { return requested_; }
    std::size_t budget() const noexcept { return budget_; }

private:
    std::size_t requested_;
    std::size_t budget_;
};

/// Default cap on the number of doubles held by a full coefficient tensor.
inline constexpr std::size_t kDefaultElementBudget = std::size_t{1} << 26;

}  // namespace qtt
