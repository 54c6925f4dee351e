#include "qtt_cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "qtt/approx.hpp"
#include "qtt/complexity.hpp"
#include "qtt/corpus.hpp"
#include "qtt/fault.hpp"
#include "qtt/format.hpp"
#include "qtt/tensor_train.hpp"
#include "qtt/tensorized.hpp"
#include "qtt_cli/function_spec.hpp"

namespace qtt::cli {

namespace {

struct RunConfig {
    int b = 2;
    int d = 0;
    std::string d_grid = "2,4,6";
    std::string m = "0";
    std::string p = "2";
    double tol = -1.0;
    std::string tol_grid = "0";
    std::string measure = "C";
    std::string func;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t budget = kDefaultElementBudget;
    int to = -1;
    int pairs = 200;
    std::string fault;
};

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    const double p = parse_number(s);
    if (!(p > 0.0)) throw DomainError("--p must be > 0");
    return p;
}

int single_degree(const RunConfig& c) {
    const std::vector<int> ms = parse_int_list(c.m);
    if (ms.size() != 1) throw DomainError("--m takes a single degree for this command");
    if (ms[0] < 0) throw DomainError("--m must be >= 0");
    return ms[0];
}

void check_common(const RunConfig& c) {
    if (c.b < 2) throw DomainError("--b must be >= 2");
    if (c.d < 0) throw DomainError("--d must be >= 0");
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

FunctionSpec load(const RunConfig& c) {
    if (c.func.empty()) throw DomainError("--func is required");
    return parse_function(c.func);
}

int cmd_tensorize(const RunConfig& c, std::ostream& out) {
    check_common(c);
    const int m = single_degree(c);
    const FunctionSpec spec = load(c);
    check_sample_density(spec, c.b, c.d, m);
    require_budget(c.b, c.d, m + 1, c.budget);
    const std::string path = c.out.empty() ? "tensorized.qttf" : c.out;

    const auto space = PolySpace::make(m, c.b);
    TensorizeOptions o;
    o.singular_points = spec.singular_points;
    o.budget = c.budget;
    const TensorizedFunction tf = tensorize(spec.f, c.d, space, o);
    const RankProfile prof = rank_profile(tf);
    write_qttf(tf, path);
    out << "level " << tf.level() << "\ncells " << tf.cells() << "\ndim " << tf.dim() << '\n';
    out << "norm_l2 " << format_double(lp_norm(tf, 2.0)) << '\n';
    out << "ranks " << join(prof.ranks) << '\n';
    out << "wrote " << path << '\n';
    return kOk;
}

int cmd_ranks(const RunConfig& c, std::ostream& out) {
    check_common(c);
    const int m = single_degree(c);
    const FunctionSpec spec = load(c);
    check_sample_density(spec, c.b, c.d, m);
    require_budget(c.b, c.d, m + 1, c.budget);
    const double tol = c.tol < 0 ? 1e-10 : c.tol;
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("--tol must lie in (0,1) for rank profiles");

    TensorizeOptions o;
    o.singular_points = spec.singular_points;
    o.budget = c.budget;
    const TensorizedFunction tf = tensorize(spec.f, c.d, PolySpace::make(m, c.b), o);
    const RankProfile prof = rank_profile(tf, tol);
    if (!c.out.empty()) write_rank_csv(prof, c.out);
    out << "nu,r_nu\n";
    for (std::size_t nu = 0; nu < prof.ranks.size(); ++nu) out << nu + 1 << ',' << prof.ranks[nu] << '\n';
    return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.b < 2) throw DomainError("--b must be >= 2");
    const int m = single_degree(c);
    const FunctionSpec spec = load(c);
    SweepConfig cfg;
    cfg.space = PolySpace::make(m, c.b);
    cfg.p = parse_p(c.p);
    cfg.d_grid = parse_int_list(c.d_grid);
    cfg.tol_grid = parse_list(c.tol_grid);
    cfg.singular_points = spec.singular_points;
    cfg.budget = c.budget;
    for (int d : cfg.d_grid) {
        if (d < 0) throw DomainError("--d-grid entries must be >= 0");
        check_sample_density(spec, c.b, d, m);
    }
    for (double t : cfg.tol_grid)
        if (!(t >= 0.0)) throw DomainError("--tol-grid entries must be >= 0");
    std::vector<Measure> measures;
    std::istringstream ms(c.measure);
    for (std::string tok; std::getline(ms, tok, ',');) measures.push_back(parse_measure(tok));
    const int top = *std::max_element(cfg.d_grid.begin(), cfg.d_grid.end());
    require_budget(c.b, top, m + 1, c.budget);
    const std::string path = c.out.empty() ? "sweep.csv" : c.out;

    const auto curves = error_curves(spec.f, measures, cfg);
    for (const auto& w : curves.front().warnings) err << "warning: " << w << '\n';
    write_curve_csv(curves, path);
    std::size_t rows = 0;
    for (const auto& cv : curves) rows += cv.points.size();
    out << "reference_level " << curves.front().reference_level << '\n';
    out << "rows " << rows << '\n' << "wrote " << path << '\n';
    return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.b < 2) throw DomainError("--b must be >= 2");
    CorpusConfig cfg;
    cfg.base = c.b;
    cfg.degrees = parse_int_list(c.m);
    for (int m : cfg.degrees)
        if (m < 0) throw DomainError("--m must be >= 0");
    cfg.max_level = c.d > 0 ? c.d : 10;
    cfg.seed = c.seed;
    cfg.pairs = c.pairs;
    if (cfg.pairs < 0) throw DomainError("--pairs must be >= 0");
    bool fault = false;
    if (!c.fault.empty()) {
        if (c.fault != "no-tol-split") throw DomainError("unknown fault '" + c.fault + "' (no-tol-split)");
        fault = true;
    }

    VerificationReport report;
    {
        fault::ScopedFault guard(fault);
        report = lemma_corpus(cfg);
    }
    const std::string json = to_json(report);
    if (c.out.empty()) {
        out << json;
    } else {
        std::ofstream os(c.out, std::ios::trunc);
        if (!os) throw IoError("cannot open for writing: " + c.out);
        os << json;
        for (const auto& r : report.results) out << (r.passed ? "pass " : "FAIL ") << r.lemma << '\n';
    }
    if (!report.all_passed()) {
        err << "failed lemmas:";
        for (const auto& name : report.failures()) err << ' ' << name;
        err << '\n';
        return kVerificationFailed;
    }
    return kOk;
}

int cmd_density(const RunConfig& c, std::ostream& out) {
    if (c.b < 2) throw DomainError("--b must be >= 2");
    if (c.d < 1) throw DomainError("--d (maximum level) must be >= 1");
    const FunctionSpec spec = load(c);
    if (!spec.simple) throw DomainError("density needs an indicator:... function");
    const double p = parse_p(c.p);
    if (std::isinf(p)) throw DomainError("density needs a finite --p");

    const DensityTable t = density_sweep(*spec.simple, c.b, c.d, p);
    std::ostringstream csv;
    csv << "d,error,error_pow,bound\n";
    for (const auto& r : t.rows)
        csv << r.d << ',' << format_double(r.error) << ',' << format_double(r.error_pow) << ','
            << format_double(r.bound) << '\n';
    if (!c.out.empty()) {
        std::ofstream os(c.out, std::ios::trunc);
        if (!os) throw IoError("cannot open for writing: " + c.out);
        os << csv.str();
    }
    out << csv.str();
    out << "slope " << format_double(t.slope) << " expected " << format_double(-std::log(double(c.b)) / p) << '\n';
    out << "within_bound " << (t.within_bound ? "yes" : "no") << '\n';
    return t.within_bound ? kOk : kVerificationFailed;
}

int cmd_extend(const RunConfig& c, std::ostream& out) {
    check_common(c);
    const int m = single_degree(c);
    const FunctionSpec spec = load(c);
    check_sample_density(spec, c.b, c.d, m);
    require_budget(c.b, c.d, m + 1, c.budget);
    if (c.to < c.d) throw DomainError("--to must be >= --d");
    const double tol = c.tol < 0 ? 1e-12 : c.tol;
    const std::string path = c.out.empty() ? "extended.qttt" : c.out;

    TensorizeOptions o;
    o.singular_points = spec.singular_points;
    o.budget = c.budget;
    const TensorTrain tt = tt_svd(tensorize(spec.f, c.d, PolySpace::make(m, c.b), o), 0.0);
    const TensorTrain ext = extend_level(tt, c.to);
    const TensorTrain rounded = round(ext, tol);
    write_qttt(rounded, path);

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double x = unif(rng);
        worst = std::max(worst, std::abs(rounded.eval(x) - tt.eval(x)));
    }
    out << "ranks_before " << join(tt.ranks()) << '\n';
    out << "ranks_extended " << join(ext.ranks()) << '\n';
    out << "ranks_rounded " << join(rounded.ranks()) << '\n';
    out << "max_eval_diff " << format_double(worst) << '\n';
    out << "wrote " << path << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tensorized function approximation toolkit", "qtt"};
    app.require_subcommand(1);
    RunConfig c;
    std::string budget_text;

    auto common = [&](CLI::App* s, bool level, bool degree) {
        s->add_option("--b", c.b, "base b >= 2");
        if (level) s->add_option("--d", c.d, "level");
        if (degree) s->add_option("--m", c.m, "polynomial degree");
        s->add_option("--func", c.func, "function spec");
        s->add_option("--seed", c.seed, "RNG seed");
        s->add_option("--out", c.out, "output path");
        s->add_option("--budget", c.budget, "element budget for full tensors");
    };

    auto* tz = app.add_subcommand("tensorize", "write the coefficient tensor (QTTF) and a summary");
    common(tz, true, true);
    auto* rk = app.add_subcommand("ranks", "print the prefix rank profile");
    common(rk, true, true);
    rk->add_option("--tol", c.tol, "relative singular-value threshold");
    auto* sw = app.add_subcommand("sweep", "error-vs-complexity curves as CSV");
    common(sw, false, true);
    sw->add_option("--d-grid", c.d_grid, "levels, comma separated");
    sw->add_option("--tol-grid", c.tol_grid, "tt_svd tolerances, comma separated");
    sw->add_option("--p", c.p, "norm index (number or inf)");
    sw->add_option("--measure", c.measure, "N, C, S, rmax, R (comma list)");
    auto* vf = app.add_subcommand("verify", "run the property corpus and write a JSON report");
    common(vf, true, true);
    vf->add_option("--pairs", c.pairs, "random pairs per closure test");
    vf->add_option("--inject-fault", c.fault, "test hook: no-tol-split");
    auto* dn = app.add_subcommand("density", "grid-snapping error table for a simple function");
    common(dn, true, false);
    dn->add_option("--p", c.p, "norm index");
    auto* ex = app.add_subcommand("extend", "extend a train to a finer level and round");
    common(ex, true, true);
    ex->add_option("--to", c.to, "target level")->required();
    ex->add_option("--tol", c.tol, "rounding tolerance");
    vf->get_option("--m")->default_str("0,1,3");
    c.m = "0";

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }
    if (vf->parsed() && vf->count("--m") == 0) c.m = "0,1,3";

    try {
        if (tz->parsed()) return cmd_tensorize(c, out);
        if (rk->parsed()) return cmd_ranks(c, out);
        if (sw->parsed()) return cmd_sweep(c, out, err);
        if (vf->parsed()) return cmd_verify(c, out, err);
        if (dn->parsed()) return cmd_density(c, out);
        if (ex->parsed()) return cmd_extend(c, out);
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace qtt::cli
