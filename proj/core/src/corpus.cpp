#include "qtt/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/lambert_w.hpp>
#include <nlohmann/json.hpp>

#include "qtt/badic.hpp"
#include "qtt/cp.hpp"
#include "qtt/quadrature.hpp"
#include "qtt/tensorized.hpp"

namespace qtt {

std::vector<CorpusFunction> function_corpus() {
    using std::numbers::pi;
    std::vector<CorpusFunction> fs;
    for (int q = 0; q <= 3; ++q) {
        CorpusFunction c;
        c.name = "x^" + std::to_string(q);
        c.f = [q](double x) { return std::pow(x, q); };
        c.degree = q;
        c.smooth = true;
        fs.push_back(std::move(c));
    }
    auto smooth = [&](std::string name, RealFunction f) {
        CorpusFunction c;
        c.name = std::move(name);
        c.f = std::move(f);
        c.smooth = true;
        fs.push_back(std::move(c));
    };
    smooth("sin(2pi x)", [](double x) { return std::sin(2 * pi * x); });
    smooth("cos(2pi x)", [](double x) { return std::cos(2 * pi * x); });
    smooth("sin(6pi x)", [](double x) { return std::sin(6 * pi * x); });
    smooth("exp(x)", [](double x) { return std::exp(x); });
    smooth("runge", [](double x) { return 1.0 / (1.0 + 25.0 * (x - 0.5) * (x - 0.5)); });
    smooth("x^5", [](double x) { return std::pow(x, 5); });
    smooth("log(1+x)", [](double x) { return std::log1p(x); });
    smooth("tanh(20(x-0.4))", [](double x) { return std::tanh(20.0 * (x - 0.4)); });

    auto singular = [&](std::string name, RealFunction f, double at) {
        CorpusFunction c;
        c.name = std::move(name);
        c.f = std::move(f);
        c.singular_points = {at};
        fs.push_back(std::move(c));
    };
    singular("|x-0.3|^0.5", [](double x) { return std::sqrt(std::abs(x - 0.3)); }, 0.3);
    singular("|x-1/3|^1.5", [](double x) { return std::pow(std::abs(x - 1.0 / 3.0), 1.5); }, 1.0 / 3.0);
    singular("sqrt(x)", [](double x) { return std::sqrt(x); }, 0.0);
    singular("x^0.6", [](double x) { return std::pow(x, 0.6); }, 0.0);
    singular("|x-1/2|", [](double x) { return std::abs(x - 0.5); }, 0.5);

    auto step = [&](std::string name, RealFunction f, int aligned) {
        CorpusFunction c;
        c.name = std::move(name);
        c.f = std::move(f);
        c.aligned_level = aligned;
        fs.push_back(std::move(c));
    };
    step("1[0,1/2)", [](double x) { return x < 0.5 ? 1.0 : 0.0; }, 1);
    step("1[0,1/3)", [](double x) { return x < 1.0 / 3.0 ? 1.0 : 0.0; }, -1);
    step("staircase", [](double x) { return x < 0.25 ? 1.0 : (x < 0.75 ? -2.0 : 0.5); }, 2);
    return fs;
}

double reference_norm(const RealFunction& f, double p, std::size_t pieces) {
    if (pieces == 0) pieces = 1;
    const double h = 1.0 / static_cast<double>(pieces);
    constexpr int kSamples = 24;
    if (std::isinf(p)) {
        double best = 0.0;
        for (std::size_t j = 0; j < pieces; ++j) {
            const double a = static_cast<double>(j) * h;
            const double b = std::nextafter(a + h, a);
            const int n = 4 * kSamples;
            std::vector<double> xs(n + 1), vs(n + 1);
            int arg = 0;
            for (int k = 0; k <= n; ++k) {
                xs[k] = k == n ? b : a + h * k / n;
                vs[k] = std::abs(f(xs[k]));
                if (vs[k] > vs[arg]) arg = k;
            }
            double lo = xs[std::max(arg - 1, 0)];
            double hi = xs[std::min(arg + 1, n)];
            double peak = vs[arg];
            const double g = (std::sqrt(5.0) - 1.0) / 2.0;
            double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
            for (int it = 0; it < 80; ++it) {
                if (f1 > f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - g * (hi - lo);
                    f1 = std::abs(f(x1));
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + g * (hi - lo);
                    f2 = std::abs(f(x2));
                }
            }
            peak = std::max({peak, f1, f2});
            best = std::max(best, peak);
        }
        return best;
    }

    const GaussRule& rule = gauss_legendre(20);
    auto integrate = [&](double lo, double hi) {
        double s = 0.0;
        for (int k = 0; k < rule.order(); ++k)
            s += rule.weights[k] * std::pow(std::abs(f(lo + (hi - lo) * rule.nodes[k])), p);
        return s * (hi - lo);
    };
    double total = 0.0;
    for (std::size_t j = 0; j < pieces; ++j) {
        // Probe strictly inside the piece so a neighbour's value never leaks in at the ends.
        const double a = static_cast<double>(j) / static_cast<double>(pieces);
        const double b = static_cast<double>(j + 1) / static_cast<double>(pieces);
        std::vector<double> cuts{a};
        double xl = a + 1e-9 * h;
        double fl = f(xl);
        for (int k = 1; k <= kSamples; ++k) {
            const double xr = k == kSamples ? b - 1e-9 * h : a + h * k / kSamples;
            const double fr = f(xr);
            if ((fl < 0 && fr > 0) || (fl > 0 && fr < 0)) {
                double lo = xl, hi = xr, flo = fl;
                for (int it = 0; it < 100 && hi - lo > 1e-17; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = f(mid);
                    if ((fm < 0) == (flo < 0) && fm != 0) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                cuts.push_back(0.5 * (lo + hi));
            }
            xl = xr;
            fl = fr;
        }
        cuts.push_back(b);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += integrate(cuts[k], cuts[k + 1]);
    }
    return std::pow(total, 1.0 / p);
}

TensorTrain random_train(const PolySpacePtr& space, int level, int max_rank, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    const int b = space->base();
    std::vector<int> ranks(static_cast<std::size_t>(level));
    for (int nu = 1; nu <= level; ++nu) {
        double cap = max_rank;
        cap = std::min(cap, std::pow(static_cast<double>(b), nu));
        cap = std::min(cap, std::pow(static_cast<double>(b), level - nu) * space->dim());
        std::uniform_int_distribution<int> pick(1, std::max(1, static_cast<int>(cap)));
        ranks[static_cast<std::size_t>(nu - 1)] = pick(rng);
    }
    std::vector<TTCore> cores(static_cast<std::size_t>(level));
    Eigen::Index rin = 1;
    for (int nu = 0; nu < level; ++nu) {
        const Eigen::Index rout = ranks[static_cast<std::size_t>(nu)];
        for (int i = 0; i < b; ++i) {
            Eigen::MatrixXd s(rin, rout);
            for (Eigen::Index k = 0; k < s.size(); ++k) s.data()[k] = gauss(rng);
            cores[static_cast<std::size_t>(nu)].slices.push_back(std::move(s));
        }
        rin = rout;
    }
    Eigen::MatrixXd tail(rin, space->dim());
    for (Eigen::Index k = 0; k < tail.size(); ++k) tail.data()[k] = gauss(rng);
    return {space, std::move(cores), std::move(tail)};
}

TensorizedFunction random_member(const PolySpacePtr& space, int level, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    TensorizedFunction z = TensorizedFunction::zeros(space, level);
    CoeffMatrix c = z.coeffs();
    for (Eigen::Index k = 0; k < c.size(); ++k) c.data()[k] = gauss(rng);
    return {space, level, std::move(c)};
}

P4Bounds p4_bounds(int base, int dim) {
    const double s = dim;
    return {2.0 + s, s * s + 3 * s + 2.0 * base + 2.0, base + 1.0 + base * base * s * s * s};
}

P4Sample p4_sample(const TensorTrain& a, const TensorTrain& b) {
    const Canonical ca = canonicalize(a);
    const Canonical cb = canonicalize(b);
    const ComplexityReport ra = representation_cost(ca.tt);
    const ComplexityReport rb = representation_cost(cb.tt);
    P4Sample s;
    s.level_a = a.level();
    s.level_b = b.level();
    s.n_N = std::max(ra.cost_N, rb.cost_N);
    s.n_C = std::max(ra.cost_C, rb.cost_C);
    s.n_S = std::max(ra.cost_S, rb.cost_S);

    const TensorTrain sum = add(ca.tt, cb.tt);
    s.sum_S = representation_cost(sum).cost_S;
    const ComplexityReport rs = complexity(sum);
    s.sum_N = rs.cost_N;
    s.sum_C = rs.cost_C;
    auto ratio = [](std::int64_t num, std::int64_t den) {
        return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
    };
    s.ratio_N = ratio(s.sum_N, s.n_N);
    s.ratio_C = ratio(s.sum_C, s.n_C);
    s.ratio_S = ratio(s.sum_S, s.n_S);
    return s;
}

std::vector<P4Sample> p4_study(const PolySpacePtr& space, int pairs, int max_level, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> level(0, max_level);
    std::vector<P4Sample> out;
    out.reserve(static_cast<std::size_t>(std::max(pairs, 0)));
    for (int k = 0; k < pairs; ++k) {
        const int da = level(rng);
        const int db = level(rng);
        const TensorTrain a = random_train(space, da, 4, rng);
        const TensorTrain b = random_train(space, db, 4, rng);
        out.push_back(p4_sample(a, b));
    }
    return out;
}

int maxrank_level_a(std::int64_t n, int base, int dim) {
    const double lb = std::log(static_cast<double>(base));
    const double arg = static_cast<double>(n) * lb / (2.0 * std::max(base, dim));
    return std::max(0, static_cast<int>(std::floor(boost::math::lambert_w0(arg) / lb)));
}

int maxrank_level_b(std::int64_t n, int base, int dim) {
    return static_cast<int>(std::max<std::int64_t>(0, (n - dim) / base));
}

TensorTrain maxrank_full(const PolySpacePtr& space, int level, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    TensorizedFunction z = TensorizedFunction::zeros(space, level);
    CoeffMatrix c = z.coeffs();
    for (Eigen::Index j = 0; j < c.rows(); ++j) c(j, 0) = gauss(rng);
    return tt_svd(TensorizedFunction(space, level, std::move(c)), 0.0);
}

TensorTrain first_cell_indicator(const PolySpacePtr& space, int level) {
    std::vector<TTCore> cores(static_cast<std::size_t>(level));
    for (auto& core : cores) {
        core.slices.assign(static_cast<std::size_t>(space->base()), Eigen::MatrixXd::Zero(1, 1));
        core.slices[0](0, 0) = std::sqrt(static_cast<double>(space->base()));
    }
    Eigen::MatrixXd tail = Eigen::MatrixXd::Zero(1, space->dim());
    tail(0, 0) = 1.0;
    return {space, std::move(cores), std::move(tail)};
}

std::vector<std::int64_t> maxrank_grid(int base, int dim, int count) {
    std::vector<std::int64_t> out;
    for (int k = 0; k < count; ++k) out.push_back(base * ((std::int64_t{64} << k) / base) + dim);
    return out;
}

MaxRankPoint maxrank_point(const PolySpacePtr& space, std::int64_t n, std::mt19937_64& rng) {
    MaxRankPoint pt;
    pt.n = n;
    pt.level_a = maxrank_level_a(n, space->base(), space->dim());
    pt.level_b = maxrank_level_b(n, space->base(), space->dim());
    const TensorTrain a = maxrank_full(space, pt.level_a, rng);
    const TensorTrain b = first_cell_indicator(space, pt.level_b);
    pt.rmax_a = a.max_rank();
    pt.cost_a = representation_cost(a).cost_rmax;
    pt.cost_b = representation_cost(b).cost_rmax;
    const ComplexityReport sum = complexity(add(a, b));
    pt.cost_sum = sum.cost_rmax;
    pt.rmax_sum = 1;
    for (int r : sum.ranks) pt.rmax_sum = std::max(pt.rmax_sum, r);
    pt.ratio = static_cast<double>(pt.cost_sum) / static_cast<double>(n);
    pt.other = p4_sample(a, b);
    return pt;
}

std::vector<MaxRankPoint> maxrank_sweep(const PolySpacePtr& space, const std::vector<std::int64_t>& ns,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<MaxRankPoint> out;
    for (std::int64_t n : ns) out.push_back(maxrank_point(space, n, rng));
    return out;
}

bool VerificationReport::all_passed() const {
    return std::all_of(results.begin(), results.end(), [](const LemmaResult& r) { return r.passed; });
}

std::vector<std::string> VerificationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& r : results)
        if (!r.passed) out.push_back(r.lemma);
    return out;
}

std::string to_json(const VerificationReport& report) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    auto num = [](double x) -> nlohmann::ordered_json {
        if (std::isfinite(x)) return x;
        return nullptr;
    };
    for (const auto& r : report.results) {
        nlohmann::ordered_json j;
        j["lemma"] = r.lemma;
        j["status"] = r.passed ? "pass" : "fail";
        j["constant_paper"] = num(r.constant_paper);
        j["constant_measured"] = num(r.constant_measured);
        j["worst_case_inputs"] = r.worst_case_inputs;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

namespace {

// One lemma's running tally. The worst measured value is kept; the first failing input wins
// the inputs slot once anything fails.
class Tally {
public:
    Tally(std::string lemma, double paper) {
        r_.lemma = std::move(lemma);
        r_.constant_paper = paper;
        r_.constant_measured = 0.0;
    }

    void observe(double measured, bool ok, const std::string& inputs) {
        ++r_.cases;
        const bool worse = r_.cases == 1 || measured > r_.constant_measured;
        if (worse) r_.constant_measured = measured;
        if (!ok && r_.passed) {
            r_.passed = false;
            r_.worst_case_inputs = inputs;
        } else if (r_.passed && worse) {
            r_.worst_case_inputs = inputs;
        }
    }

    // Keeps the bound "measured <= paper".
    void bound(double measured, const std::string& inputs) { observe(measured, measured <= r_.constant_paper, inputs); }

    LemmaResult result() const { return r_; }

private:
    LemmaResult r_;
};

class Suites {
public:
    Tally& operator()(const std::string& lemma, double paper) {
        for (auto& t : tallies_)
            if (t.result().lemma == lemma) return t;
        tallies_.emplace_back(lemma, paper);
        return tallies_.back();
    }

    VerificationReport report() const {
        VerificationReport out;
        for (const auto& t : tallies_) out.results.push_back(t.result());
        return out;
    }

private:
    std::deque<Tally> tallies_;
};

std::string tag(const std::string& f, int b, int m, int d) {
    std::ostringstream os;
    os << "f=" << f << " b=" << b << " m=" << m << " d=" << d;
    return os.str();
}

std::vector<int> corpus_levels(int base, int max_level) {
    int cap = 0;
    while (std::pow(static_cast<double>(base), cap + 1) <= 1024.0) ++cap;
    const int top = std::max(0, std::min(max_level, cap));
    std::vector<int> ls;
    for (int d : {0, 1, 2, 4, 6, top})
        if (d <= top) ls.push_back(d);
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    return ls;
}

double max_abs_diff(const CoeffMatrix& a, const CoeffMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

void coordinate_suites(Suites& s, int b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> lev(0, 20);
    Tally& bij = s("coordinate-bijection", std::ldexp(1.0, -50));
    Tally& comp = s("coordinate-composition", std::ldexp(1.0, -45));
    double worst = 0.0, worst_comp = 0.0;
    bool digits_ok = true;
    for (int k = 0; k < 10000; ++k) {
        const double x = unif(rng);
        const int d = lev(rng);
        worst = std::max(worst, std::abs(decode(encode(x, b, d)) - x));
        const int dbar = lev(rng);
        const int dd = std::uniform_int_distribution<int>(0, dbar)(rng);
        const BaseBCoordinate full = encode(x, b, dbar);
        const BaseBCoordinate outer = encode(x, b, dd);
        const BaseBCoordinate glued = recompose(outer, encode(outer.remainder, b, dbar - dd));
        if (glued.digits != full.digits) digits_ok = false;
        worst_comp = std::max(worst_comp, std::abs(glued.remainder - full.remainder));
    }
    bij.bound(worst, "b=" + std::to_string(b) + " 10^4 points d<=20");
    comp.observe(worst_comp, digits_ok && worst_comp <= std::ldexp(1.0, -45),
                 "b=" + std::to_string(b) + " 10^4 points dbar<=20");
}

void local_space_suites(Suites& s, const PolySpacePtr& space, std::mt19937_64& rng) {
    const int b = space->base(), m = space->degree(), ns = space->dim();
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd c(ns);
        for (int k = 0; k < ns; ++k) c[k] = gauss(rng);
        for (int i = 0; i < b; ++i) {
            const Eigen::VectorXd dc = space->dilation(i) * c;
            for (int g = 0; g < 64; ++g) {
                const double y = (g + 0.5) / 64.0;
                worst = std::max(worst, std::abs(space->evaluate(dc, y) - space->evaluate(c, (y + i) / b)));
            }
        }
    }
    s("dilation-closure", 1e-12).bound(worst, "b=" + std::to_string(b) + " m=" + std::to_string(m));

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(ns, ns);
    for (int i = 0; i < b; ++i) acc += space->dilation(i).transpose() * space->dilation(i) / b;
    const double refine = (acc - Eigen::MatrixXd::Identity(ns, ns)).cwiseAbs().maxCoeff();
    s("refinement-identity", 1e-12).bound(refine, "b=" + std::to_string(b) + " m=" + std::to_string(m));
}

void tensorized_suites(Suites& s, const PolySpacePtr& space, const std::vector<int>& levels,
                       std::mt19937_64& rng) {
    const int b = space->base(), m = space->degree(), ns = space->dim();
    const auto corpus = function_corpus();
    const double inf = std::numeric_limits<double>::infinity();

    // Members of V_{b,d,S}: polynomials of degree <= m, aligned steps, random members.
    for (int d : levels) {
        std::vector<std::pair<std::string, TensorizedFunction>> members;
        for (const auto& cf : corpus) {
            if ((cf.degree >= 0 && cf.degree <= m) || (cf.aligned_level >= 0 && cf.aligned_level <= d && b == 2)) {
                TensorizeOptions o;
                o.singular_points = cf.singular_points;
                members.emplace_back(cf.name, tensorize(cf.f, d, space, o));
            }
        }
        for (int t = 0; t < 2 && d <= 6; ++t) members.emplace_back("random-member", random_member(space, d, rng));

        for (const auto& [name, tf] : members) {
            const std::string in = tag(name, b, m, d);
            const std::size_t pieces = *checked_pow(b, d);
            for (double p : {1.0, 2.0, inf}) {
                const double ours = lp_norm(tf, p);
                const double ref = reference_norm([&tf](double x) { return tf.eval(x); }, p, pieces);
                s("lp-isometry", 1e-6).bound(std::abs(ours - ref), in + " p=" + (std::isinf(p) ? std::string("inf") : std::to_string(int(p))));
            }
            // Exact members: tt_svd ranks match the profile. Past 256 cells the top monomial's
            // share of a cell falls under the 1e-10 profile threshold, so the counts part ways.
            if (*checked_pow(b, d) > 256) continue;
            const TensorTrain tt = tt_svd(tf, 0.0);
            const bool nonzero = tf.coeffs().cwiseAbs().maxCoeff() > 0;
            const RankProfile prof = rank_profile(tf);
            int mism = 0;
            for (int nu = 0; nu < d && nonzero; ++nu) mism += tt.ranks()[nu] != prof.ranks[nu];
            s("tt-svd-exact-ranks", 0).bound(mism, in);
        }
    }

    // Polynomial rank law.
    for (int d : levels) {
        if (*checked_pow(b, d) > 256) continue;
        for (int q = 0; q <= m; ++q) {
            const TensorizedFunction tf = tensorize([q](double x) { return std::pow(x, q); }, d, space);
            const RankProfile prof = rank_profile(tf);
            int mism = 0;
            for (int nu = 1; nu <= d; ++nu) {
                const double expect = std::min(std::pow(static_cast<double>(b), nu), q + 1.0);
                mism += prof.ranks[nu - 1] != static_cast<int>(expect);
            }
            s("polynomial-rank-law", 0).bound(mism, tag("x^" + std::to_string(q), b, m, d));
        }
    }

    for (const auto& cf : corpus) {
        TensorizeOptions o;
        o.singular_points = cf.singular_points;
        for (int d : levels) {
            const std::string in = tag(cf.name, b, m, d);
            const TensorizedFunction tf = tensorize(cf.f, d, space, o);
            const RankProfile prof = rank_profile(tf);
            double worst_bound = 0.0, worst_adm = 0.0;
            for (int nu = 1; nu <= d; ++nu) {
                const int r = prof.ranks[nu - 1];
                const double cap = std::min(std::pow(double(b), nu), std::pow(double(b), d - nu) * ns);
                worst_bound = std::max(worst_bound, r / cap);
                const int prev = nu == 1 ? 1 : prof.ranks[nu - 2];
                if (r > 0 && prev > 0) {
                    worst_adm = std::max(worst_adm, double(r) / (b * prev));
                    worst_adm = std::max(worst_adm, double(prev) / (b * r));
                }
            }
            s("rank-bound", 1.0).bound(worst_bound, in);
            s("rank-admissibility", 1.0).bound(worst_adm, in);

            // Level invariance under relevel.
            if (std::pow(double(b), d + 2) * ns <= 16384.0) {
                const RankProfile fine = rank_profile(relevel_up(tf, d + 2));
                int mism = 0;
                for (int nu = 0; nu < d; ++nu) mism += fine.ranks[nu] != prof.ranks[nu];
                double beyond = 0.0;
                for (int nu = d + 1; nu <= d + 2; ++nu)
                    beyond = std::max(beyond, fine.ranks[nu - 1] / std::min(std::pow(double(b), nu), double(ns)));
                s("level-invariance", 0).bound(mism, in);
                s("relevel-rank-bound", 1.0).bound(beyond, in);
            }

            // Roundtrip.
            const TensorTrain tt = tt_svd(tf, 0.0);
            s("tt-svd-roundtrip", 1e-11).bound(max_abs_diff(to_full(tt).coeffs(), tf.coeffs()), in);

            // Extension.
            const TensorTrain ext = extend_level(tt, d + 4);
            const TensorTrain rr = round(ext, 1e-12);
            double beyond = 0.0;
            for (int nu = d + 1; nu <= d + 4; ++nu) beyond = std::max(beyond, rr.ranks()[nu - 1] / double(ns));
            s("extension-rank-bound", 1.0).bound(beyond, in);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            double ev = 0.0;
            for (int k = 0; k < 1000; ++k) {
                const double x = unif(rng);
                ev = std::max(ev, std::abs(ext.eval(x) - tt.eval(x)));
            }
            s("extension-eval", 1e-11).bound(ev, in);
            const double sbound = double(b) * representation_cost(tt).cost_S + 4.0 * b * b * ns * ns * ns;
            s("extension-sparse-cost", 1.0).bound(representation_cost(ext).cost_S / sbound, in);

            // Canonical rank ceiling via the cell-wise CP form.
            const CPRep cp = cellwise_cp(tf);
            double cev = 0.0;
            for (int k = 0; k < 200; ++k) {
                const double x = unif(rng);
                cev = std::max(cev, std::abs(eval(cp, x) - tf.eval(x)));
            }
            s("canonical-rank-ceiling", 1.0).bound(cp.rank() / std::pow(double(b), d), in);
            s("canonical-cp-eval", 1e-12).bound(cev, in);

            // Complexity inclusions on the canonical form.
            const ComplexityReport rep = complexity(tt);
            const double ns_ = static_cast<double>(rep.cost_S);
            const double n_over_s = rep.cost_S > 0 ? rep.cost_N / ns_ : (rep.cost_N > 0 ? inf : 0.0);
            const double s_over_c = static_cast<double>(rep.cost_S) / static_cast<double>(rep.cost_C);
            s("complexity-inclusions", 1.0).bound(std::max(n_over_s, s_over_c), in);
            s("complexity-quadratic", 1.0)
                .bound(rep.cost_C / (double(b) * rep.cost_N * rep.cost_N + double(b) * ns), in);

            // Sobolev level invariance for smooth members.
            if (cf.smooth && std::pow(double(b), d + 2) * ns <= 16384.0) {
                const TensorizedFunction fine = relevel_up(tf, d + 2);
                for (int k = 1; k <= m; ++k) {
                    for (double p : {1.0, 2.0}) {
                        const double a = sobolev_seminorm(tf, k, p);
                        const double c = sobolev_seminorm(fine, k, p);
                        s("sobolev-level-invariance", 1e-8)
                            .bound(std::abs(a - c) / std::max(1.0, std::abs(a)), in + " k=" + std::to_string(k));
                    }
                }
            }
        }
    }

    if (m >= 1) {
        for (int d = 0; d <= 10; ++d) {
            if (std::pow(double(b), d) * ns > (1 << 20)) break;
            const TensorizedFunction tf = tensorize([](double x) { return x; }, d, space);
            s("sobolev-identity", 1e-10).bound(std::abs(sobolev_seminorm(tf, 1, 2.0) - 1.0), tag("x", b, m, d));
        }
    }

    // Local projection never raises ranks: members of V_{b,d,P3} reprojected to P_m.
    const PolySpacePtr big = PolySpace::make(3, b);
    for (int d : levels) {
        if (d > 8) continue;
        std::vector<std::pair<std::string, TensorizedFunction>> src;
        for (int q = 0; q <= 3; ++q) src.emplace_back("x^" + std::to_string(q), tensorize([q](double x) { return std::pow(x, q); }, d, big));
        src.emplace_back("random-train", to_full(random_train(big, d, 3, rng)));
        if (d <= 6) src.emplace_back("random-member", random_member(big, d, rng));
        for (const auto& [name, tf] : src) {
            const RankProfile before = rank_profile(tf);
            const RankProfile after = rank_profile(reproject(tf, space));
            double worst = 0.0;
            for (int nu = 0; nu < d; ++nu)
                if (before.ranks[nu] > 0) worst = std::max(worst, double(after.ranks[nu]) / before.ranks[nu]);
            s("local-projection-ranks", 1.0).bound(worst, tag(name, b, m, d));
        }
    }
}

void train_suites(Suites& s, const PolySpacePtr& space, const CorpusConfig& cfg, std::mt19937_64& rng) {
    const int b = space->base(), m = space->degree(), ns = space->dim();
    const int top = std::min(cfg.max_level, 8);
    std::uniform_int_distribution<int> lev(0, top);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Block sums.
    for (int t = 0; t < 40; ++t) {
        const int d = lev(rng);
        const TensorTrain a = random_train(space, d, 4, rng);
        const TensorTrain c = random_train(space, lev(rng), 4, rng);
        const TensorTrain sum = add(a, c);
        const std::string in = "random pair b=" + std::to_string(b) + " m=" + std::to_string(m) + " d=" +
                               std::to_string(a.level()) + "," + std::to_string(c.level());
        const TensorTrain a2 = a.level() < c.level() ? extend_level(a, c.level()) : a;
        const TensorTrain c2 = c.level() < a.level() ? extend_level(c, a.level()) : c;
        int mism = 0;
        for (int nu = 0; nu < sum.level(); ++nu) mism += sum.ranks()[nu] != a2.ranks()[nu] + c2.ranks()[nu];
        s("sum-ranks", 0).bound(mism, in);
        const double lhs = representation_cost(sum).cost_S;
        const double rhs = representation_cost(a2).cost_S + representation_cost(c2).cost_S;
        s("sum-sparse-cost", 1.0).bound(lhs / rhs, in);
        double ev = 0.0, scale = 1.0;
        for (int k = 0; k < 200; ++k) {
            const double x = unif(rng);
            const double va = a.eval(x), vc = c.eval(x);
            scale = std::max({scale, std::abs(va), std::abs(vc)});
            ev = std::max(ev, std::abs(sum.eval(x) - va - vc));
        }
        s("sum-eval", 1e-10).bound(ev / scale, in);

        const ComplexityReport rep = complexity(a);
        const double n_over_s = rep.cost_S > 0 ? double(rep.cost_N) / rep.cost_S : 0.0;
        s("complexity-inclusions", 1.0).bound(std::max(n_over_s, double(rep.cost_S) / rep.cost_C), in);
        s("complexity-quadratic", 1.0).bound(rep.cost_C / (double(b) * rep.cost_N * rep.cost_N + double(b) * ns), in);
    }

    // Rounding error and rank monotonicity.
    for (int d : {2, 4, 6, 8}) {
        if (d > cfg.max_level || std::pow(double(b), d) * ns > 65536.0) continue;
        for (double tol : {0.1, 0.3, 0.5}) {
            const TensorizedFunction tf = random_member(space, d, rng);
            const TensorTrain tt = tt_svd(tf, tol);
            const double err = (to_full(tt).coeffs() - tf.coeffs()).norm() / tf.coeffs().norm();
            const std::string in = "random member b=" + std::to_string(b) + " m=" + std::to_string(m) +
                                   " d=" + std::to_string(d) + " tol=" + std::to_string(tol);
            s("rounding-error-bound", 1.0).bound(err / (tol + 1e-12), in + " (tt_svd)");

            const TensorTrain big = random_train(space, d, 8, rng);
            const TensorTrain rounded = round(big, tol);
            const CoeffMatrix full = to_full(big).coeffs();
            const double rerr = (to_full(rounded).coeffs() - full).norm() / full.norm();
            s("rounding-error-bound", 1.0).bound(rerr / (tol + 1e-12), in + " (round)");
            int up = 0;
            for (int nu = 0; nu < d; ++nu) up += rounded.ranks()[nu] > big.ranks()[nu];
            s("rounding-rank-monotone", 0).bound(up, in);
        }
    }

    // CP embedding.
    for (int t = 0; t < 100; ++t) {
        const int d = std::uniform_int_distribution<int>(0, std::min(top, 6))(rng);
        const int r = std::uniform_int_distribution<int>(1, 4)(rng);
        std::normal_distribution<double> gauss;
        CPRep cp{space, std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d), Eigen::MatrixXd(b, r)),
                 Eigen::MatrixXd(ns, r)};
        for (auto& w : cp.factors)
            for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = gauss(rng);
        for (Eigen::Index k = 0; k < cp.local.size(); ++k) cp.local.data()[k] = gauss(rng);
        const TensorTrain tt = cp_to_tt(cp);
        const ComplexityReport rep = representation_cost(cp);
        const std::string in = "random CP b=" + std::to_string(b) + " m=" + std::to_string(m) +
                               " d=" + std::to_string(d) + " r=" + std::to_string(r);
        s("cp-embedding-sparse-cost", 1.0).bound(double(rep.cost_S) / double(*rep.cost_R), in);
        double ev = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double x = unif(rng);
            ev = std::max(ev, std::abs(tt.eval(x) - eval(cp, x)));
        }
        s("cp-embedding-eval", 1e-11).bound(ev, in);
    }

    // Closure under addition.
    const P4Bounds bounds = p4_bounds(b, ns);
    const std::string config_tag = " (b=" + std::to_string(b) + ",m=" + std::to_string(m) + ")";
    const auto samples = p4_study(space, cfg.pairs, top, cfg.seed + 7919u * static_cast<std::uint64_t>(m + 1));
    for (const auto& smp : samples) {
        const std::string in = "random pair b=" + std::to_string(b) + " m=" + std::to_string(m) + " d=" +
                               std::to_string(smp.level_a) + "," + std::to_string(smp.level_b);
        s("p4-N" + config_tag, bounds.N).bound(smp.ratio_N, in);
        s("p4-C" + config_tag, bounds.C).bound(smp.ratio_C, in);
        s("p4-S" + config_tag, bounds.S).bound(smp.ratio_S, in);
    }

    // Max-rank counterexample.
    const auto sweep = maxrank_sweep(space, maxrank_grid(b, ns, 7), cfg.seed + 17u);
    int increasing = 0;
    bool strictly = true;
    for (std::size_t k = 1; k < sweep.size(); ++k) {
        if (sweep[k].ratio > sweep[k - 1].ratio) {
            ++increasing;
        } else {
            strictly = false;
        }
    }
    const std::string in = "n~64..4096 b=" + std::to_string(b) + " m=" + std::to_string(m);
    s("maxrank-no-p4-constant", 4).observe(increasing, strictly && increasing >= 4, in);
    double other = 0.0, inputs = 0.0;
    for (const auto& pt : sweep) {
        other = std::max({other, pt.other.ratio_N / bounds.N, pt.other.ratio_C / bounds.C, pt.other.ratio_S / bounds.S});
        inputs = std::max({inputs, double(pt.cost_a) / pt.n, double(pt.cost_b) / pt.n});
    }
    s("maxrank-inputs-within-budget", 1.0).bound(inputs, in);
    s("maxrank-other-measures-bounded", 1.0).bound(other, in);
}

}  // namespace

VerificationReport lemma_corpus(const CorpusConfig& config) {
    require_base(config.base);
    if (config.max_level < 0) throw DomainError("max_level must be >= 0");
    for (int m : config.degrees)
        if (m < 0) throw DomainError("degrees must be >= 0");
    Suites s;
    if (config.degrees.empty()) return s.report();

    std::mt19937_64 rng(config.seed);
    coordinate_suites(s, config.base, rng);
    const std::vector<int> levels = corpus_levels(config.base, config.max_level);
    for (int m : config.degrees) {
        const PolySpacePtr space = PolySpace::make(m, config.base);
        local_space_suites(s, space, rng);
        tensorized_suites(s, space, levels, rng);
        train_suites(s, space, config, rng);
    }
    return s.report();
}

}  // namespace qtt
