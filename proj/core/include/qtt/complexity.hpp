#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtt/cp.hpp"
#include "qtt/errors.hpp"
#include "qtt/tensor_train.hpp"

namespace qtt {

enum class Measure { N, C, S, RMax, R };

/// Accepts "N", "C", "S", "rmax", "R" (case-insensitive); throws DomainError otherwise.
Measure parse_measure(std::string_view name);
std::string to_string(Measure m);

struct ComplexityReport {
    int level = 0;
    std::vector<int> ranks;
    std::int64_t cost_rmax = 0;
    std::int64_t cost_N = 0;
    std::int64_t cost_C = 0;
    std::int64_t cost_S = 0;
    std::optional<std::int64_t> cost_R;  // CP inputs only
    int d_min = 0;
    bool d_min_verified = false;
};

/// Costs of the representation exactly as given, without canonicalization. nnz counts entries
/// with |v| > eta * max|core|, per core (eta = 0: exact zeros only).
ComplexityReport representation_cost(const TensorTrain& tt, double eta = 0.0);
ComplexityReport representation_cost(const CPRep& cp, double eta = 0.0);

struct CanonicalOptions {
    double round_tol = 1e-12;
    double level_tol = 1e-10;
    std::size_t budget = kDefaultElementBudget;
};

struct Canonical {
    TensorTrain tt;
    bool level_verified = false;
};

/// Rounds, then (when the full tensor fits the budget) coarsens to the minimal level and
/// recompresses there. A zero train becomes the level-0 zero train.
Canonical canonicalize(const TensorTrain& tt, const CanonicalOptions& options = {});

/// Costs of the canonical form.
ComplexityReport complexity(const TensorTrain& tt, double eta = 0.0, const CanonicalOptions& options = {});
ComplexityReport complexity(const CPRep& cp, double eta = 0.0, const CanonicalOptions& options = {});

/// Selects one field of a report; cost_R must be present for Measure::R.
std::int64_t cost_of(const ComplexityReport& report, Measure m);

}  // namespace qtt
