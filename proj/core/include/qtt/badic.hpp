#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qtt {

/// A point of [0,1) written as (i_1, ..., i_d, y) at base b:
///   x = sum_k i_k b^{-k} + b^{-d} y,  i_k in {0..b-1},  y in [0,1).
struct BaseBCoordinate {
    int base = 2;
    std::vector<int> digits;
    double remainder = 0.0;

    int level() const noexcept { return static_cast<int>(digits.size()); }

    friend bool operator==(const BaseBCoordinate&, const BaseBCoordinate&) = default;
};

/// Throws DomainError unless every digit is in range and 0 <= y < 1.
void validate(const BaseBCoordinate& c);

/// Conversion map t_{b,d}. Level 0 is the identity on y.
double decode(const BaseBCoordinate& c);

/// Inverse of decode. Digits are extracted one at a time (multiply by b, take the floor), so the
/// remainder at level d never goes through b^d. Cell boundaries belong to the cell on their right.
BaseBCoordinate encode(double x, int base, int level);

/// Level composition: glues an outer coordinate at level d with the coordinate of its remainder at
/// level dbar - d. The outer remainder is assumed to equal decode(inner).
BaseBCoordinate recompose(const BaseBCoordinate& outer, const BaseBCoordinate& inner);

/// Cell index j = sum_k i_k b^{d-k} (i_1 most significant).
std::size_t cell_index(std::span<const int> digits, int base);

/// Base-b digits of j at width `level`, most significant first.
std::vector<int> cell_digits(std::size_t j, int base, int level);

/// b^d if it fits in size_t, nullopt otherwise.
std::optional<std::size_t> checked_pow(int base, int level);

/// Validates b >= 2, throws DomainError otherwise.
void require_base(int base);

}  // namespace qtt
