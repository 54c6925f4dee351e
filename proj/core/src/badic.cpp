#include "qtt/badic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qtt/errors.hpp"

namespace qtt {

namespace {

constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2;

}  // namespace

void require_base(int base) {
    if (base < 2) throw DomainError("base must be >= 2, got " + std::to_string(base));
}

void validate(const BaseBCoordinate& c) {
    require_base(c.base);
    for (std::size_t k = 0; k < c.digits.size(); ++k) {
        if (c.digits[k] < 0 || c.digits[k] >= c.base) {
            throw DomainError("digit " + std::to_string(c.digits[k]) + " at position " +
                              std::to_string(k + 1) + " outside {0.." +
                              std::to_string(c.base - 1) + "}");
        }
    }
    if (!(c.remainder >= 0.0 && c.remainder < 1.0)) {
        throw DomainError("remainder " + std::to_string(c.remainder) + " outside [0,1)");
    }
}

double decode(const BaseBCoordinate& c) {
    validate(c);
    const double b = c.base;
    double v = c.remainder;
    for (auto it = c.digits.rbegin(); it != c.digits.rend(); ++it) v = (*it + v) / b;
    // (b-1 + v)/b can round up to 1 when v is the largest double below 1.
    return v < 1.0 ? v : kBelowOne;
}

BaseBCoordinate encode(double x, int base, int level) {
    require_base(base);
    if (level < 0) throw DomainError("level must be >= 0");
    if (!(x >= 0.0 && x < 1.0)) throw DomainError("x = " + std::to_string(x) + " outside [0,1)");

    BaseBCoordinate c;
    c.base = base;
    c.digits.resize(static_cast<std::size_t>(level));
    double r = x;
    for (int k = 0; k < level; ++k) {
        const double t = r * base;
        double i = std::floor(t);
        if (i > base - 1) {
            // t rounded up to b; stay in the last cell.
            c.digits[static_cast<std::size_t>(k)] = base - 1;
            r = kBelowOne;
            continue;
        }
        c.digits[static_cast<std::size_t>(k)] = static_cast<int>(i);
        r = t - i;
        if (r >= 1.0) r = kBelowOne;
    }
    c.remainder = r;
    return c;
}

BaseBCoordinate recompose(const BaseBCoordinate& outer, const BaseBCoordinate& inner) {
    if (outer.base != inner.base) {
        throw DomainError("base mismatch in recompose: " + std::to_string(outer.base) + " vs " +
                          std::to_string(inner.base));
    }
    validate(outer);
    validate(inner);
    BaseBCoordinate c;
    c.base = outer.base;
    c.digits = outer.digits;
    c.digits.insert(c.digits.end(), inner.digits.begin(), inner.digits.end());
    c.remainder = inner.remainder;
    return c;
}

std::size_t cell_index(std::span<const int> digits, int base) {
    std::size_t j = 0;
    for (int i : digits) j = j * static_cast<std::size_t>(base) + static_cast<std::size_t>(i);
    return j;
}

std::vector<int> cell_digits(std::size_t j, int base, int level) {
    std::vector<int> digits(static_cast<std::size_t>(level));
    for (int k = level - 1; k >= 0; --k) {
        digits[static_cast<std::size_t>(k)] = static_cast<int>(j % static_cast<std::size_t>(base));
        j /= static_cast<std::size_t>(base);
    }
    return digits;
}

std::optional<std::size_t> checked_pow(int base, int level) {
    std::size_t v = 1;
    const auto ub = static_cast<std::size_t>(base);
    for (int k = 0; k < level; ++k) {
        if (v > std::numeric_limits<std::size_t>::max() / ub) return std::nullopt;
        v *= ub;
    }
    return v;
}

}  // namespace qtt
