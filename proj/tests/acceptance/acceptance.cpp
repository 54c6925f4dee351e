// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/rational.hpp>

#include "oracles.hpp"
#include "qtt/approx.hpp"
#include "qtt/badic.hpp"
#include "qtt/complexity.hpp"
#include "qtt/corpus.hpp"
#include "qtt/cp.hpp"
#include "qtt/tensor_train.hpp"
#include "qtt/tensorized.hpp"

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

qtt::TensorizedFunction tensorize(const qtt::CorpusFunction& cf, int d, const qtt::PolySpacePtr& s) {
    qtt::TensorizeOptions o;
    o.singular_points = cf.singular_points;
    return qtt::tensorize(cf.f, d, s, o);
}

// ---- 1

Outcome coordinate_bijection() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    long digit_mismatch = 0;
    for (int t = 0; t < 100000; ++t) {
        const int b = std::vector<int>{2, 3, 10}[t % 3];
        const int d = t % 21;
        const double x = u(rng);
        const auto c = qtt::encode(x, b, d);
        worst = std::max(worst, std::abs(qtt::decode(c) - x));
        // Composition: digits at dbar are the digits at d followed by those of the remainder.
        const int dbar = d + 1 + t % 5;
        const auto glued = qtt::recompose(c, qtt::encode(c.remainder, b, dbar - d));
        digit_mismatch += glued.digits != qtt::encode(x, b, dbar).digits;
    }
    const double tol = std::ldexp(1.0, -50);
    return {worst <= tol && digit_mismatch == 0,
            "max roundtrip " + fmt(worst) + " <= " + fmt(tol) + ", composition digit mismatches " + std::to_string(digit_mismatch)};
}

// ---- 2

double oracle_norm(const qtt::TensorizedFunction& tf, double p) {
    const std::size_t cells = tf.cells();
    const double h = 1.0 / static_cast<double>(cells);
    double acc = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
        const Eigen::VectorXd c = tf.coeffs().row(static_cast<Eigen::Index>(j)).transpose();
        auto g = [&](double y) { return oracle::eval_local(c, y); };
        if (std::isinf(p)) {
            int arg = 0;
            double best = 0.0;
            for (int k = 0; k <= 64; ++k) {
                const double v = std::abs(g(k / 64.0));
                if (v > best) best = v, arg = k;
            }
            const auto r = boost::math::tools::brent_find_minima([&](double y) { return -std::abs(g(y)); },
                                                                 std::max(0.0, (arg - 1) / 64.0),
                                                                 std::min(1.0, (arg + 1) / 64.0), 50);
            acc = std::max({acc, best, -r.second});
        } else {
            acc += h * oracle::integrate([&](double y) { return std::pow(std::abs(g(y)), p); }, 0.0, 1.0);
        }
    }
    return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

Outcome lp_isometry() {
    const auto s = qtt::PolySpace::make(3, 2);
    const auto corpus = qtt::function_corpus();
    double worst = 0.0;
    std::string where;
    for (const auto& cf : corpus) {
        for (int d = 0; d <= 10; d += 2) {
            const auto tf = tensorize(cf, d, s);
            for (double p : {1.0, 2.0, kInf}) {
                const double e = std::abs(qtt::lp_norm(tf, p) - oracle_norm(tf, p));
                if (e > worst) worst = e, where = cf.name + " d=" + std::to_string(d) + " p=" + fmt(p);
            }
        }
    }
    return {worst <= 1e-6, std::to_string(corpus.size()) + " functions, d=0..10, max |diff| " + fmt(worst) +
                               " <= 1e-6" + (where.empty() ? "" : " (worst " + where + ")")};
}

// ---- 3

Outcome polynomial_rank_law() {
    int cases = 0, law_miss = 0, oracle_miss = 0;
    std::string first;
    for (int b : {2, 3}) {
        for (int m = 0; m <= 3; ++m) {
            const auto s = qtt::PolySpace::make(m, b);
            for (int q = 0; q <= m; ++q) {
                for (int d = 1; d <= 8; ++d) {
                    const auto tf = qtt::tensorize([q](double x) { return std::pow(x, q); }, d, s);
                    const auto ours = qtt::rank_profile(tf, 1e-10).ranks;
                    const auto dense = oracle::rank_profile(tf.coeffs(), b, d, 1e-10);
                    ++cases;
                    oracle_miss += ours != dense;
                    for (int nu = 1; nu <= d; ++nu) {
                        const int law = static_cast<int>(std::min(std::pow(double(b), nu), q + 1.0));
                        if (ours[nu - 1] != law) {
                            ++law_miss;
                            if (first.empty()) {
                                const auto sv = oracle::unfolding_sv(tf.coeffs(), b, nu);
                                first = "b=" + std::to_string(b) + " q=" + std::to_string(q) + " d=" + std::to_string(d) +
                                        " nu=" + std::to_string(nu) + " rank " + std::to_string(ours[nu - 1]) +
                                        " vs " + std::to_string(law) + ", sigma_" + std::to_string(law) +
                                        "/sigma_1 = " + fmt(sv[law - 1] / sv[0]);
                            }
                        }
                    }
                }
            }
        }
    }
    return {law_miss == 0 && oracle_miss == 0,
            std::to_string(cases) + " profiles, law mismatches " + std::to_string(law_miss) +
                ", dense-SVD mismatches " + std::to_string(oracle_miss) + (first.empty() ? "" : "; first: " + first)};
}

// ---- 4

Outcome admissibility_and_invariance() {
    long adm = 0, inv = 0, checks = 0;
    for (int b : {2, 3}) {
        for (int m : {0, 1, 3}) {
            const auto s = qtt::PolySpace::make(m, b);
            for (const auto& cf : qtt::function_corpus()) {
                for (int d : {1, 2, 4, 6}) {
                    if (std::pow(double(b), d + 2) * (m + 1) > 1 << 16) continue;
                    const auto tf = tensorize(cf, d, s);
                    const auto r = qtt::rank_profile(tf).ranks;
                    const auto fine = qtt::rank_profile(qtt::relevel_up(tf, d + 2)).ranks;
                    for (int nu = 0; nu + 1 < d; ++nu) {
                        adm += r[nu + 1] > b * r[nu];
                        adm += r[nu] > b * r[nu + 1];
                    }
                    for (int nu = 0; nu < d; ++nu) inv += fine[nu] != r[nu];
                    ++checks;
                }
            }
        }
    }
    return {adm == 0 && inv == 0, std::to_string(checks) + " profiles, admissibility violations " + std::to_string(adm) +
                                      ", relevel mismatches " + std::to_string(inv)};
}

// ---- 5

Outcome extension_bound() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    long viol = 0, runs = 0;
    double worst = 0.0;
    const auto corpus = qtt::function_corpus();
    for (int m : {0, 1, 3}) {
        const auto s = qtt::PolySpace::make(m, 2);
        for (const auto& cf : corpus) {
            for (int d : {1, 3, 5}) {
                const auto tt = qtt::tt_svd(tensorize(cf, d, s), 0.0);
                const auto r = qtt::round(qtt::extend_level(tt, d + 4), 1e-12);
                for (int nu = d; nu < d + 4; ++nu) viol += r.ranks()[nu] > m + 1;
                for (int k = 0; k < 1000; ++k) {
                    const double x = u(rng);
                    worst = std::max(worst, std::abs(r.eval(x) - tt.eval(x)));
                }
                ++runs;
            }
        }
    }
    return {viol == 0 && worst <= 1e-11, std::to_string(runs) + " extensions by 4 levels, rank violations " +
                                             std::to_string(viol) + ", max eval diff " + fmt(worst) + " <= 1e-11"};
}

// ---- 6

Outcome p4_constants() {
    std::string detail;
    bool pass = true;
    for (int m : {0, 1, 3}) {
        const auto s = qtt::PolySpace::make(m, 2);
        const auto bounds = qtt::p4_bounds(2, m + 1);
        double n = 0, c = 0, sp = 0;
        for (const auto& x : qtt::p4_study(s, 200, 10, 600 + m)) {
            n = std::max(n, x.ratio_N);
            c = std::max(c, x.ratio_C);
            sp = std::max(sp, x.ratio_S);
        }
        pass = pass && n <= bounds.N && c <= bounds.C && sp <= bounds.S;
        detail += (detail.empty() ? "" : "; ") + std::string("m=") + std::to_string(m) + " N " + fmt(n) + "/" +
                  fmt(bounds.N) + " C " + fmt(c) + "/" + fmt(bounds.C) + " S " + fmt(sp) + "/" + fmt(bounds.S);
    }
    return {pass, "200 pairs each, max ratio/bound: " + detail};
}

// ---- 7

Outcome maxrank_failure() {
    bool pass = true;
    std::string detail;
    for (int m : {0, 1, 3}) {
        const auto s = qtt::PolySpace::make(m, 2);
        const auto bounds = qtt::p4_bounds(2, m + 1);
        const auto pts = qtt::maxrank_sweep(s, qtt::maxrank_grid(2, m + 1, 7), 700 + m);
        int increasing = 0;
        bool strict = true, bounded = true;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k > 0) {
                if (pts[k].ratio > pts[k - 1].ratio) ++increasing;
                else strict = false;
            }
            const auto& o = pts[k].other;
            bounded = bounded && o.ratio_N <= bounds.N && o.ratio_C <= bounds.C && o.ratio_S <= bounds.S;
        }
        pass = pass && strict && increasing >= 4 && bounded;
        detail += (detail.empty() ? "" : "; ") + std::string("m=") + std::to_string(m) + " ratio " +
                  fmt(pts.front().ratio) + " -> " + fmt(pts.back().ratio) + " over " + std::to_string(increasing) +
                  " doublings" + (strict ? "" : " (not strict)") + (bounded ? ", N/C/S bounded" : ", N/C/S UNBOUNDED");
    }
    return {pass, detail};
}

// ---- 8

Outcome complexity_inclusions() {
    std::mt19937_64 rng(8);
    long viol = 0, reps = 0;
    for (int b : {2, 3}) {
        for (int m : {0, 1, 3}) {
            const auto s = qtt::PolySpace::make(m, b);
            std::vector<qtt::TensorTrain> trains;
            for (const auto& cf : qtt::function_corpus())
                for (int d : {2, 4})
                    for (double tol : {0.0, 1e-6}) trains.push_back(qtt::tt_svd(tensorize(cf, d, s), tol));
            for (int t = 0; t < 20; ++t) trains.push_back(qtt::random_train(s, 1 + t % 5, 5, rng));
            for (const auto& tt : trains) {
                const auto r = qtt::complexity(tt);
                ++reps;
                viol += !(r.cost_N <= r.cost_S && r.cost_S <= r.cost_C);
                viol += r.cost_C > b * r.cost_N * r.cost_N + b * (m + 1);
            }
        }
    }
    return {viol == 0, std::to_string(reps) + " canonical representations, violations " + std::to_string(viol)};
}

// ---- 9

Outcome cp_embedding() {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    long viol = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int b = 2 + t % 3, m = t % 4, d = 1 + t % 7, r = 1 + t % 5;
        qtt::CPRep cp{qtt::PolySpace::make(m, b), {}, Eigen::MatrixXd(m + 1, r)};
        for (int nu = 0; nu < d; ++nu) {
            Eigen::MatrixXd w(b, r);
            for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = g(rng);
            cp.factors.push_back(w);
        }
        for (Eigen::Index i = 0; i < cp.local.size(); ++i) cp.local.data()[i] = g(rng);
        const auto tt = qtt::cp_to_tt(cp);
        viol += qtt::representation_cost(tt).cost_S > *qtt::representation_cost(cp).cost_R;
        for (int k = 0; k < 100; ++k) {
            const double x = u(rng);
            worst = std::max(worst, std::abs(tt.eval(x) - qtt::eval(cp, x)));
        }
    }
    return {viol == 0 && worst <= 1e-11,
            "100 CP reps, cost_S > cost_R in " + std::to_string(viol) + ", max eval diff " + fmt(worst) + " <= 1e-11"};
}

// ---- 10

Outcome density_decay() {
    const qtt::SimpleFunction f{{1.0 / 3.0}, {1.0, 0.0}};
    bool pass = true;
    std::string detail;
    for (double p : {1.0, 2.0}) {
        const auto t = qtt::density_sweep(f, 2, 20, p);
        double worst = 0.0;
        bool envelope = true;
        for (const auto& r : t.rows) {
            const long long pow2 = 1LL << r.d;
            const auto exact = boost::rational<long long>(1, 3) - boost::rational<long long>(pow2 / 3, pow2);
            worst = std::max(worst, std::abs(r.error_pow - boost::rational_cast<double>(exact)));
            envelope = envelope && r.error_pow <= std::pow(2.0, p) * std::ldexp(1.0, -r.d);
        }
        const double target = -std::log(2.0) / p;
        const bool slope_ok = std::abs(t.slope - target) <= 0.1 * std::abs(target);
        pass = pass && worst <= 1e-12 && envelope && slope_ok;
        detail += (detail.empty() ? "" : "; ") + std::string("p=") + fmt(p) + " oracle diff " + fmt(worst) +
                  (envelope ? ", in envelope" : ", OUT of envelope") + ", slope " + fmt(t.slope) + " vs " + fmt(target);
    }
    return {pass, detail};
}

// ---- 11

Outcome spline_rate() {
    qtt::SweepConfig cfg;
    cfg.space = qtt::PolySpace::make(3, 2);
    cfg.d_grid = {3, 4, 5, 6, 7, 8};
    auto f = [](double x) { return std::sin(2 * std::numbers::pi * x); };
    const auto res = qtt::sweep_candidates(f, cfg);
    std::vector<double> d, le, lo;
    for (const auto& c : res.candidates) {
        d.push_back(c.d);
        le.push_back(std::log(c.error));
        // Direct per-cell projection error as a cross-check.
        const double h = std::ldexp(1.0, -c.d);
        double e2 = 0.0;
        const auto tf = qtt::tensorize(f, c.d, cfg.space);
        for (std::size_t j = 0; j < tf.cells(); ++j) {
            const Eigen::VectorXd cc = tf.coeffs().row(static_cast<Eigen::Index>(j)).transpose();
            e2 += h * oracle::integrate([&](double y) {
                      const double r = f((j + y) * h) - oracle::eval_local(cc, y);
                      return r * r;
                  }, 0.0, 1.0);
        }
        lo.push_back(0.5 * std::log(e2));
    }
    const double target = -4.0 * std::log(2.0);
    const double s = oracle::slope(d, le);
    const double so = oracle::slope(d, lo);
    return {std::abs(s - target) <= 0.15 * std::abs(target),
            "slope " + fmt(s) + " (direct oracle " + fmt(so) + ") vs " + fmt(target) + " +-15%"};
}

// ---- 12

Outcome sobolev() {
    double worst_id = 0.0, worst_inv = 0.0;
    for (int m : {1, 3}) {
        const auto s = qtt::PolySpace::make(m, 2);
        for (int d = 0; d <= 10; ++d)
            worst_id = std::max(worst_id, std::abs(qtt::sobolev_seminorm(qtt::tensorize([](double x) { return x; }, d, s), 1, 2.0) - 1.0));
    }
    const auto s = qtt::PolySpace::make(3, 2);
    for (const auto& cf : qtt::function_corpus()) {
        if (!cf.smooth) continue;
        for (int d : {2, 4, 6}) {
            const auto tf = tensorize(cf, d, s);
            const auto fine = qtt::relevel_up(tf, d + 2);
            for (int k : {1, 2}) {
                const double a = qtt::sobolev_seminorm(tf, k, 2.0);
                const double b = qtt::sobolev_seminorm(fine, k, 2.0);
                worst_inv = std::max(worst_inv, std::abs(a - b) / std::max(1.0, a));
            }
        }
    }
    return {worst_id <= 1e-10 && worst_inv <= 1e-8,
            "|x|_{W12} error " + fmt(worst_id) + " <= 1e-10, relevel drift " + fmt(worst_inv) + " <= 1e-8"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"coordinate bijection", coordinate_bijection},
        {"Lp isometry", lp_isometry},
        {"polynomial rank law", polynomial_rank_law},
        {"rank admissibility and level invariance", admissibility_and_invariance},
        {"extension rank bound", extension_bound},
        {"closure-under-addition constants", p4_constants},
        {"max-rank closure failure", maxrank_failure},
        {"complexity inclusions", complexity_inclusions},
        {"CP embedding", cp_embedding},
        {"density decay", density_decay},
        {"spline rate", spline_rate},
        {"Sobolev seminorm", sobolev},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
