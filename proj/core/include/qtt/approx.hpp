#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qtt/complexity.hpp"
#include "qtt/tensorized.hpp"

namespace qtt {

struct ErrorCurvePoint {
    std::int64_t n = 0;
    Measure measure = Measure::C;
    double error = 0.0;
    int d = 0;
    std::vector<int> ranks;
    double p = 2.0;
    double tol = 0.0;
};

/// Lower envelope of (n, error) for one measure. zero_error is the norm of the reference, i.e.
/// the error of the zero approximant, used as E_n below the first point.
struct ErrorCurve {
    Measure measure = Measure::C;
    double p = 2.0;
    double zero_error = 0.0;
    int reference_level = 0;
    std::vector<ErrorCurvePoint> points;
    std::vector<std::string> warnings;
};

struct SweepConfig {
    PolySpacePtr space;
    double p = 2.0;
    std::vector<int> d_grid;
    std::vector<double> tol_grid{0.0};
    /// 0 picks max(d_grid) + 2, lowered (with a warning) to fit the budget.
    int reference_level = 0;
    int reference_quadrature = 64;
    std::vector<double> singular_points;
    std::size_t budget = kDefaultElementBudget;
};

/// One (d, tol) grid point: the canonical costs of tt_svd(tensorize(f, d), tol) and its L^p
/// distance to the reference.
struct SweepCandidate {
    int d = 0;
    double tol = 0.0;
    ComplexityReport report;  // cost_R filled from the cell-wise CP form
    double error = 0.0;
};

struct SweepResult {
    std::vector<SweepCandidate> candidates;
    double zero_error = 0.0;
    int reference_level = 0;
    std::vector<std::string> warnings;
};

SweepResult sweep_candidates(const RealFunction& f, const SweepConfig& config);

/// Lower envelope of the candidates under one measure.
ErrorCurve envelope(const SweepResult& result, Measure measure, double p);

ErrorCurve error_curve(const RealFunction& f, Measure measure, const SweepConfig& config);
std::vector<ErrorCurve> error_curves(const RealFunction& f, const std::vector<Measure>& measures,
                                     const SweepConfig& config);

/// Header "measure,n,d,p,error,ranks"; ranks joined by '|'.
void write_curve_csv(const std::vector<ErrorCurve>& curves, const std::string& path);
std::string curve_csv(const std::vector<ErrorCurve>& curves);

struct ClassSeminormEstimate {
    double alpha = 0.0;
    double q = std::numeric_limits<double>::infinity();
    double value = 0.0;
    std::int64_t n_max = 0;
};

/// Best error at budget n as a right-continuous step function of the curve.
double best_error(const ErrorCurve& curve, std::int64_t n);

/// Truncated approximation-class quasi-norm over n = 1..n_max:
///   q = inf: max_n n^alpha E(n-1);  q < inf: (sum_n (n^alpha E(n-1))^q / n)^{1/q}.
ClassSeminormEstimate class_seminorm(const ErrorCurve& curve, double alpha, double q, std::int64_t n_max);

/// f = sum_i values[i] 1_[x_i, x_{i+1}) with x_0 = 0, x_k = 1 and the interior breakpoints
/// in between.
struct SimpleFunction {
    std::vector<double> breakpoints;
    std::vector<double> values;

    double operator()(double x) const;
};

void validate(const SimpleFunction& f);

struct DensityRow {
    int d = 0;
    double error = 0.0;      // ||f - f_d||_p
    double error_pow = 0.0;  // ||f - f_d||_p^p
    double bound = 0.0;      // 2^p b^{-d} sum |a_i|^p
};

struct DensityTable {
    int base = 2;
    double p = 1.0;
    std::vector<DensityRow> rows;
    /// Least-squares slope of log(error) against d over the rows with nonzero error; NaN if fewer
    /// than two such rows.
    double slope = 0.0;
    bool within_bound = true;
};

/// f_d snaps every breakpoint down to the level-d grid; its error is integrated exactly.
DensityTable density_sweep(const SimpleFunction& f, int base, int d_max, double p);

/// The snapped function f_d as a piecewise-constant tensor.
TensorizedFunction snapped(const SimpleFunction& f, int base, int level,
                           std::size_t budget = kDefaultElementBudget);

}  // namespace qtt
