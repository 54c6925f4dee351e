#include "qtt/complexity.hpp"

#include <algorithm>
#include <cctype>

namespace qtt {

Measure parse_measure(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "n") return Measure::N;
    if (s == "c") return Measure::C;
    if (s == "s") return Measure::S;
    if (s == "rmax") return Measure::RMax;
    if (s == "r") return Measure::R;
    throw DomainError("unknown measure '" + std::string(name) + "' (expected N, C, S, rmax or R)");
}

std::string to_string(Measure m) {
    switch (m) {
        case Measure::N: return "N";
        case Measure::C: return "C";
        case Measure::S: return "S";
        case Measure::RMax: return "rmax";
        case Measure::R: return "R";
    }
    return "?";
}

namespace {

template <class Range>
std::int64_t count_nonzeros(const Range& blocks, double eta) {
    double peak = 0.0;
    for (const auto& m : blocks) {
        if (m.size() > 0) peak = std::max(peak, m.cwiseAbs().maxCoeff());
    }
    if (peak == 0.0) return 0;
    const double cut = eta * peak;
    std::int64_t n = 0;
    for (const auto& m : blocks) n += (m.array().abs() > cut).count();
    return n;
}

}  // namespace

ComplexityReport representation_cost(const TensorTrain& tt, double eta) {
    if (!(eta >= 0.0)) throw DomainError("sparsity threshold must be >= 0");
    ComplexityReport rep;
    const std::int64_t b = tt.base();
    const std::int64_t ns = tt.dim();
    rep.level = tt.level();
    rep.d_min = tt.level();
    rep.ranks = tt.ranks();

    const std::int64_t rmax = tt.max_rank();
    rep.cost_rmax = b * rep.level * rmax * rmax + rmax * ns;

    std::int64_t prev = 1;
    for (int r : rep.ranks) {
        rep.cost_N += r;
        rep.cost_C += b * prev * r;
        prev = r;
    }
    rep.cost_C += prev * ns;

    for (const auto& core : tt.cores()) rep.cost_S += count_nonzeros(core.slices, eta);
    rep.cost_S += count_nonzeros(std::vector<Eigen::MatrixXd>{tt.tail()}, eta);
    return rep;
}

ComplexityReport representation_cost(const CPRep& cp, double eta) {
    ComplexityReport rep = representation_cost(cp_to_tt(cp), eta);
    const std::int64_t b = cp.space->base();
    rep.cost_R = b * cp.level() * cp.rank() + std::int64_t{cp.rank()} * cp.space->dim();
    return rep;
}

Canonical canonicalize(const TensorTrain& tt, const CanonicalOptions& options) {
    TensorTrain r = round(tt, options.round_tol);
    if (r.norm() == 0.0) return {TensorTrain::zero(tt.space_ptr(), 0), true};
    try {
        const TensorizedFunction full = to_full(r, options.budget);
        const TensorizedFunction coarse = coarsen_to_minimal(full, options.level_tol);
        if (coarse.coeffs().cwiseAbs().maxCoeff() == 0.0) return {TensorTrain::zero(tt.space_ptr(), 0), true};
        return {tt_svd(coarse, options.round_tol), true};
    } catch (const BudgetError&) {
        return {std::move(r), false};
    }
}

ComplexityReport complexity(const TensorTrain& tt, double eta, const CanonicalOptions& options) {
    const Canonical c = canonicalize(tt, options);
    ComplexityReport rep = representation_cost(c.tt, eta);
    rep.d_min_verified = c.level_verified;
    return rep;
}

ComplexityReport complexity(const CPRep& cp, double eta, const CanonicalOptions& options) {
    ComplexityReport rep = complexity(cp_to_tt(cp), eta, options);
    rep.cost_R = representation_cost(cp, eta).cost_R;
    return rep;
}

std::int64_t cost_of(const ComplexityReport& report, Measure m) {
    switch (m) {
        case Measure::N: return report.cost_N;
        case Measure::C: return report.cost_C;
        case Measure::S: return report.cost_S;
        case Measure::RMax: return report.cost_rmax;
        case Measure::R:
            if (!report.cost_R) throw DomainError("cost_R is only defined for CP representations");
            return *report.cost_R;
    }
    return 0;
}

}  // namespace qtt
