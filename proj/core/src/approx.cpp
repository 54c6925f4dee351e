#include "qtt/approx.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "qtt/badic.hpp"
#include "qtt/format.hpp"

namespace qtt {

namespace {

bool fits(int base, int level, int dim, std::size_t budget) {
    try {
        require_budget(base, level, dim, budget);
        return true;
    } catch (const BudgetError&) {
        return false;
    }
}

}  // namespace

SweepResult sweep_candidates(const RealFunction& f, const SweepConfig& config) {
    if (!config.space) throw DomainError("sweep needs a local space");
    if (config.d_grid.empty() || config.tol_grid.empty()) throw DomainError("sweep grids must be nonempty");
    if (!(config.p > 0.0)) throw DomainError("p must be > 0");
    for (int d : config.d_grid)
        if (d < 0) throw DomainError("levels must be >= 0");
    for (double t : config.tol_grid)
        if (!(t >= 0.0)) throw DomainError("tolerances must be >= 0");

    const PolySpace& space = *config.space;
    const int b = space.base();
    const int d_top = *std::max_element(config.d_grid.begin(), config.d_grid.end());
    require_budget(b, d_top, space.dim(), config.budget);

    SweepResult out;
    int d_ref = config.reference_level > 0 ? config.reference_level : d_top + 2;
    d_ref = std::max(d_ref, d_top);
    while (d_ref > d_top && !fits(b, d_ref, space.dim(), config.budget)) --d_ref;
    const int wanted = config.reference_level > 0 ? config.reference_level : d_top + 2;
    if (d_ref < wanted) {
        out.warnings.push_back("reference level lowered from " + std::to_string(wanted) + " to " +
                               std::to_string(d_ref) + " to respect the element budget");
    }
    out.reference_level = d_ref;

    TensorizeOptions ref_opts;
    ref_opts.quadrature_order = config.reference_quadrature;
    ref_opts.singular_points = config.singular_points;
    ref_opts.budget = config.budget;
    const TensorizedFunction reference = tensorize(f, d_ref, config.space, ref_opts);
    out.zero_error = lp_norm(reference, config.p);

    TensorizeOptions opts;
    opts.singular_points = config.singular_points;
    opts.budget = config.budget;
    CanonicalOptions canon_opts;
    canon_opts.budget = config.budget;

    for (int d : config.d_grid) {
        const TensorizedFunction tf = tensorize(f, d, config.space, opts);
        for (double tol : config.tol_grid) {
            const TensorTrain tt = tt_svd(tf, tol);
            const TensorizedFunction approx = to_full(tt, config.budget);
            SweepCandidate c;
            c.d = d;
            c.tol = tol;
            const Canonical canon = canonicalize(tt, canon_opts);
            c.report = representation_cost(canon.tt);
            c.report.d_min_verified = canon.level_verified;
            const CPRep cp = cellwise_cp(to_full(canon.tt, config.budget));
            c.report.cost_R = std::int64_t{b} * cp.level() * cp.rank() + std::int64_t{cp.rank()} * space.dim();
            c.error = lp_norm(subtract(reference, approx, config.budget), config.p);
            out.candidates.push_back(std::move(c));
        }
    }
    return out;
}

ErrorCurve envelope(const SweepResult& result, Measure measure, double p) {
    ErrorCurve curve;
    curve.measure = measure;
    curve.p = p;
    curve.zero_error = result.zero_error;
    curve.reference_level = result.reference_level;
    curve.warnings = result.warnings;

    std::vector<ErrorCurvePoint> all;
    all.reserve(result.candidates.size());
    for (const auto& c : result.candidates) {
        ErrorCurvePoint pt;
        pt.n = cost_of(c.report, measure);
        pt.measure = measure;
        pt.error = c.error;
        pt.d = c.d;
        pt.ranks = c.report.ranks;
        pt.p = p;
        pt.tol = c.tol;
        all.push_back(std::move(pt));
    }
    std::stable_sort(all.begin(), all.end(), [](const ErrorCurvePoint& a, const ErrorCurvePoint& b) {
        return a.n != b.n ? a.n < b.n : a.error < b.error;
    });
    double best = std::numeric_limits<double>::infinity();
    for (auto& pt : all) {
        if (pt.error < best) {
            best = pt.error;
            curve.points.push_back(std::move(pt));
        }
    }
    return curve;
}

ErrorCurve error_curve(const RealFunction& f, Measure measure, const SweepConfig& config) {
    return envelope(sweep_candidates(f, config), measure, config.p);
}

std::vector<ErrorCurve> error_curves(const RealFunction& f, const std::vector<Measure>& measures,
                                     const SweepConfig& config) {
    const SweepResult r = sweep_candidates(f, config);
    std::vector<ErrorCurve> out;
    for (Measure m : measures) out.push_back(envelope(r, m, config.p));
    return out;
}

std::string curve_csv(const std::vector<ErrorCurve>& curves) {
    std::ostringstream os;
    os << "measure,n,d,p,error,ranks\n";
    for (const auto& c : curves) {
        for (const auto& pt : c.points) {
            os << to_string(pt.measure) << ',' << pt.n << ',' << pt.d << ',' << format_double(pt.p) << ','
               << format_double(pt.error) << ',';
            for (std::size_t i = 0; i < pt.ranks.size(); ++i) os << (i ? "|" : "") << pt.ranks[i];
            os << '\n';
        }
    }
    return os.str();
}

void write_curve_csv(const std::vector<ErrorCurve>& curves, const std::string& path) {
    auto os = detail::open_out(path, false);
    os << curve_csv(curves);
    if (!os) throw IoError("write failed: " + path);
}

double best_error(const ErrorCurve& curve, std::int64_t n) {
    double e = curve.zero_error;
    for (const auto& pt : curve.points) {
        if (pt.n > n) break;
        e = std::min(e, pt.error);
    }
    return e;
}

ClassSeminormEstimate class_seminorm(const ErrorCurve& curve, double alpha, double q, std::int64_t n_max) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be > 0");
    if (!(q > 0.0)) throw DomainError("q must be > 0");
    if (n_max < 1) throw DomainError("n_max must be >= 1");

    std::vector<ErrorCurvePoint> pts = curve.points;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.n < b.n; });

    ClassSeminormEstimate est{alpha, q, 0.0, n_max};
    std::size_t next = 0;
    double e = curve.zero_error;
    double acc = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        // E(n - 1)
        while (next < pts.size() && pts[next].n <= n - 1) e = std::min(e, pts[next++].error);
        const double term = std::pow(static_cast<double>(n), alpha) * e;
        if (std::isinf(q)) {
            acc = std::max(acc, term);
        } else {
            acc += std::pow(term, q) / static_cast<double>(n);
        }
    }
    est.value = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
    return est;
}

double SimpleFunction::operator()(double x) const {
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

void validate(const SimpleFunction& f) {
    if (f.values.size() != f.breakpoints.size() + 1) {
        throw DomainError("a simple function with k breakpoints needs k+1 values");
    }
    double prev = 0.0;
    for (double x : f.breakpoints) {
        if (!(x > prev) || !(x < 1.0)) throw DomainError("breakpoints must be increasing inside (0,1)");
        prev = x;
    }
    for (double v : f.values)
        if (!std::isfinite(v)) throw DomainError("simple function values must be finite");
}

namespace {

SimpleFunction snap(const SimpleFunction& f, int base, int level) {
    const double scale = std::pow(static_cast<double>(base), level);
    SimpleFunction g;
    g.values.push_back(f.values.front());
    for (std::size_t i = 0; i < f.breakpoints.size(); ++i) {
        const double x = std::floor(scale * f.breakpoints[i]) / scale;
        // breakpoints that collapse onto the same grid point keep the last value
        if (!g.breakpoints.empty() && x <= g.breakpoints.back()) {
            g.values.back() = f.values[i + 1];
        } else if (x == 0.0) {
            g.values.back() = f.values[i + 1];
        } else {
            g.breakpoints.push_back(x);
            g.values.push_back(f.values[i + 1]);
        }
    }
    return g;
}

}  // namespace

DensityTable density_sweep(const SimpleFunction& f, int base, int d_max, double p) {
    validate(f);
    require_base(base);
    if (!(p > 0.0) || std::isinf(p)) throw DomainError("density sweep needs a finite p > 0");
    if (d_max < 1) throw DomainError("d_max must be >= 1");

    DensityTable table;
    table.base = base;
    table.p = p;
    double mass = 0.0;
    for (double a : f.values) mass += std::pow(std::abs(a), p);

    for (int d = 1; d <= d_max; ++d) {
        const SimpleFunction g = snap(f, base, d);
        std::vector<double> cuts{0.0, 1.0};
        cuts.insert(cuts.end(), f.breakpoints.begin(), f.breakpoints.end());
        cuts.insert(cuts.end(), g.breakpoints.begin(), g.breakpoints.end());
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        double err = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double lo = cuts[k];
            const double hi = cuts[k + 1];
            const double diff = f(lo) - g(lo);
            if (diff != 0.0) err += (hi - lo) * std::pow(std::abs(diff), p);
        }
        DensityRow row;
        row.d = d;
        row.error_pow = err;
        row.error = std::pow(err, 1.0 / p);
        row.bound = std::pow(2.0, p) * std::pow(static_cast<double>(base), -d) * mass;
        if (row.error_pow > row.bound) table.within_bound = false;
        table.rows.push_back(row);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& r : table.rows) {
        if (r.error <= 0.0) continue;
        const double y = std::log(r.error);
        sx += r.d;
        sy += y;
        sxx += double(r.d) * r.d;
        sxy += r.d * y;
        ++cnt;
    }
    table.slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::nan("");
    return table;
}

TensorizedFunction snapped(const SimpleFunction& f, int base, int level, std::size_t budget) {
    validate(f);
    auto space = PolySpace::make(0, base);
    TensorizedFunction z = TensorizedFunction::zeros(space, level, budget);
    const SimpleFunction g = snap(f, base, level);
    CoeffMatrix c = z.coeffs();
    const double h = std::pow(static_cast<double>(base), -level);
    for (Eigen::Index j = 0; j < c.rows(); ++j) c(j, 0) = g(static_cast<double>(j) * h);
    return {space, level, std::move(c)};
}

}  // namespace qtt
