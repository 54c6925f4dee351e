#include "qtt/tensorized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "qtt/badic.hpp"
#include "qtt/quadrature.hpp"

namespace qtt {

std::size_t require_budget(int base, int level, int dim, std::size_t budget) {
    const auto cells = checked_pow(base, level);
    const auto d = static_cast<std::size_t>(dim);
    if (!cells || *cells > std::numeric_limits<std::size_t>::max() / d) {
        throw BudgetError(std::numeric_limits<std::size_t>::max(), budget);
    }
    const std::size_t n = *cells * d;
    if (n > budget) throw BudgetError(n, budget);
    return n;
}

TensorizedFunction::TensorizedFunction(PolySpacePtr space, int level, CoeffMatrix coeffs)
    : space_(std::move(space)), level_(level), coeffs_(std::move(coeffs)) {
    if (!space_) throw DomainError("TensorizedFunction needs a local space");
    if (level_ < 0) throw DomainError("level must be >= 0");
    const auto cells = checked_pow(space_->base(), level_);
    if (!cells || coeffs_.rows() != static_cast<Eigen::Index>(*cells) ||
        coeffs_.cols() != space_->dim()) {
        throw DomainError("coefficient shape does not match (b, d, m) = (" +
                          std::to_string(space_->base()) + ", " + std::to_string(level_) + ", " +
                          std::to_string(space_->degree()) + ")");
    }
}

TensorizedFunction TensorizedFunction::zeros(PolySpacePtr space, int level, std::size_t budget) {
    require_budget(space->base(), level, space->dim(), budget);
    const auto cells = static_cast<Eigen::Index>(*checked_pow(space->base(), level));
    return {space, level, CoeffMatrix::Zero(cells, space->dim())};
}

double TensorizedFunction::eval(double x) const {
    const BaseBCoordinate c = encode(x, base(), level_);
    const auto j = static_cast<Eigen::Index>(cell_index(c.digits, base()));
    return space_->evaluate(coeffs_.row(j).transpose(), c.remainder);
}

double eval(const TensorizedFunction& tf, double x) { return tf.eval(x); }

TensorizedFunction tensorize(const RealFunction& f, int level, const PolySpacePtr& space,
                             const TensorizeOptions& options) {
    TensorizedFunction zero = TensorizedFunction::zeros(space, level, options.budget);
    CoeffMatrix coeffs = zero.coeffs();
    const std::size_t cells = zero.cells();
    const double h = std::pow(static_cast<double>(space->base()), -level);
    const int order = options.quadrature_order > 0 ? options.quadrature_order
                                                   : space->quadrature_order();

    for (std::size_t j = 0; j < cells; ++j) {
        const double left = static_cast<double>(j) * h;
        int cell_order = order;
        for (double s : options.singular_points) {
            if (s >= left && s <= left + h) cell_order = 2 * order;
        }
        const double jd = static_cast<double>(j);
        coeffs.row(static_cast<Eigen::Index>(j)) =
            space->project_coefficients([&](double y) { return f((jd + y) * h); }, cell_order)
                .transpose();
    }
    return {space, level, std::move(coeffs)};
}

namespace {

double bisect_root(const PolySpace& space, const Eigen::Ref<const Eigen::VectorXd>& c, double lo, double hi) {
    double flo = space.evaluate(c, lo);
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = space.evaluate(c, mid);
        if ((fm < 0.0) == (flo < 0.0) && fm != 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Sign changes of the polynomial in (0,1). The polynomial is monotone between consecutive
// critical points, so the derivative's roots bracket every root.
std::vector<double> sign_change_roots(const PolySpace& space, const Eigen::Ref<const Eigen::VectorXd>& c,
                                      int order) {
    std::vector<double> knots{0.0};
    if (order >= 1) {
        const Eigen::VectorXd dc = space.derivative_coefficients(c, 1);
        if (dc.cwiseAbs().maxCoeff() > 0.0) {
            const auto inner = sign_change_roots(space, dc, order - 1);
            knots.insert(knots.end(), inner.begin(), inner.end());
        }
    }
    knots.push_back(1.0);
    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double lo = knots[k], hi = knots[k + 1];
        const double vl = space.evaluate(c, lo), vh = space.evaluate(c, hi);
        if ((vl < 0.0 && vh > 0.0) || (vl > 0.0 && vh < 0.0)) roots.push_back(bisect_root(space, c, lo, hi));
    }
    return roots;
}

std::vector<double> sign_change_roots(const PolySpace& space, const Eigen::Ref<const Eigen::VectorXd>& c) {
    return sign_change_roots(space, c, space.degree() - 1);
}

double gauss_abs_pow(const PolySpace& space, const Eigen::Ref<const Eigen::VectorXd>& c,
                     double a, double b, double p, const GaussRule& rule) {
    double acc = 0.0;
    const double len = b - a;
    for (int q = 0; q < rule.order(); ++q) {
        const double y = a + len * rule.nodes[static_cast<std::size_t>(q)];
        acc += rule.weights[static_cast<std::size_t>(q)] * std::pow(std::abs(space.evaluate(c, y)), p);
    }
    return acc * len;
}

}  // namespace

double local_lp_pow(const PolySpace& space, const Eigen::Ref<const Eigen::VectorXd>& c, double p) {
    if (p == 2.0) return c.squaredNorm();
    const GaussRule& rule = gauss_legendre(space.quadrature_order());
    if (space.degree() == 0) return std::pow(std::abs(c[0]), p);
    std::vector<double> cuts = sign_change_roots(space, c);
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(1.0);
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        if (cuts[s + 1] > cuts[s]) acc += gauss_abs_pow(space, c, cuts[s], cuts[s + 1], p, rule);
    }
    return acc;
}

double local_sup(const PolySpace& space, const Eigen::Ref<const Eigen::VectorXd>& c) {
    double best = std::max(std::abs(space.evaluate(c, 0.0)), std::abs(space.evaluate(c, 1.0)));
    if (space.degree() == 0) return best;
    const int n = 8 * space.dim();
    for (int g = 1; g < n; ++g) best = std::max(best, std::abs(space.evaluate(c, double(g) / n)));
    const Eigen::VectorXd dc = space.derivative_coefficients(c, 1);
    for (double y : sign_change_roots(space, dc)) best = std::max(best, std::abs(space.evaluate(c, y)));
    return best;
}

double lp_norm(const TensorizedFunction& tf, double p) {
    if (!(p > 0.0)) throw DomainError("p must be > 0");
    const auto& C = tf.coeffs();
    if (std::isinf(p)) {
        double best = 0.0;
        for (Eigen::Index j = 0; j < C.rows(); ++j)
            best = std::max(best, local_sup(tf.space(), C.row(j).transpose()));
        return best;
    }
    const double h = std::pow(static_cast<double>(tf.base()), -tf.level());
    if (p == 2.0) return std::sqrt(h * C.squaredNorm());
    double acc = 0.0;
    for (Eigen::Index j = 0; j < C.rows(); ++j)
        acc += local_lp_pow(tf.space(), C.row(j).transpose(), p);
    return std::pow(h * acc, 1.0 / p);
}

double sobolev_seminorm(const TensorizedFunction& tf, int k, double p) {
    if (k < 0) throw DomainError("derivative order must be >= 0");
    if (k == 0) return lp_norm(tf, p);
    if (!(p > 0.0)) throw DomainError("p must be > 0");
    const auto& C = tf.coeffs();
    const PolySpace& S = tf.space();
    // d/dx = b^d d/dy on every cell.
    const double scale = std::pow(static_cast<double>(tf.base()), double(tf.level()) * k);
    if (std::isinf(p)) {
        double best = 0.0;
        for (Eigen::Index j = 0; j < C.rows(); ++j)
            best = std::max(best, local_sup(S, S.derivative_coefficients(C.row(j).transpose(), k)));
        return scale * best;
    }
    const double h = std::pow(static_cast<double>(tf.base()), -tf.level());
    double acc = 0.0;
    for (Eigen::Index j = 0; j < C.rows(); ++j)
        acc += local_lp_pow(S, S.derivative_coefficients(C.row(j).transpose(), k), p);
    return scale * std::pow(h * acc, 1.0 / p);
}

Eigen::VectorXd unfolding_singular_values(const TensorizedFunction& tf, int nu) {
    if (nu < 1 || nu > tf.level()) throw DomainError("unfolding index outside 1..d");
    const auto rows = static_cast<Eigen::Index>(*checked_pow(tf.base(), nu));
    const auto cols = static_cast<Eigen::Index>(tf.elements()) / rows;
    Eigen::Map<const CoeffMatrix> M(tf.coeffs().data(), rows, cols);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    if (svd.info() != Eigen::Success) {
        throw NumericError("SVD did not converge on unfolding " + std::to_string(nu));
    }
    return svd.singularValues();
}

RankProfile rank_profile(const TensorizedFunction& tf, double tol) {
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("rank tolerance must be in (0,1)");
    RankProfile profile{tf.level(), std::vector<int>(static_cast<std::size_t>(tf.level()), 0), tol};
    for (int nu = 1; nu <= tf.level(); ++nu) {
        const Eigen::VectorXd s = unfolding_singular_values(tf, nu);
        if (s.size() == 0 || s[0] == 0.0) continue;
        int r = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i) r += s[i] > tol * s[0] ? 1 : 0;
        profile.ranks[static_cast<std::size_t>(nu - 1)] = r;
    }
    return profile;
}

TensorizedFunction partial_eval(const TensorizedFunction& tf, std::span<const int> digits) {
    const int nu = static_cast<int>(digits.size());
    if (nu > tf.level()) throw DomainError("more digits than the representation level");
    for (int i : digits) {
        if (i < 0 || i >= tf.base()) throw DomainError("digit " + std::to_string(i) + " out of range");
    }
    const auto block = static_cast<Eigen::Index>(*checked_pow(tf.base(), tf.level() - nu));
    const auto first = static_cast<Eigen::Index>(cell_index(digits, tf.base())) * block;
    CoeffMatrix sub = tf.coeffs().middleRows(first, block);
    return {tf.space_ptr(), tf.level() - nu, std::move(sub)};
}

TensorizedFunction relevel_up(const TensorizedFunction& tf, int new_level, std::size_t budget) {
    if (new_level < tf.level()) throw DomainError("relevel_up needs new_level >= level");
    require_budget(tf.base(), new_level, tf.dim(), budget);
    const PolySpace& S = tf.space();
    const int b = tf.base();
    CoeffMatrix cur = tf.coeffs();
    for (int lev = tf.level(); lev < new_level; ++lev) {
        CoeffMatrix next(cur.rows() * b, cur.cols());
        for (Eigen::Index j = 0; j < cur.rows(); ++j) {
            for (int i = 0; i < b; ++i)
                next.row(j * b + i) = (S.dilation(i) * cur.row(j).transpose()).transpose();
        }
        cur = std::move(next);
    }
    return {tf.space_ptr(), new_level, std::move(cur)};
}

namespace {

// Attempts one coarsening step; returns false if some coarse cell does not glue.
bool coarsen_once(const PolySpace& S, const CoeffMatrix& fine, double tol, CoeffMatrix& coarse) {
    const int b = S.base();
    const int n = S.dim();
    Eigen::MatrixXd stacked(b * n, n);
    for (int i = 0; i < b; ++i) stacked.middleRows(i * n, n) = S.dilation(i);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(stacked);

    coarse.resize(fine.rows() / b, n);
    Eigen::VectorXd rhs(b * n);
    for (Eigen::Index j = 0; j < coarse.rows(); ++j) {
        for (int i = 0; i < b; ++i) rhs.segment(i * n, n) = fine.row(j * b + i).transpose();
        const double scale = rhs.norm();
        if (scale == 0.0) {
            coarse.row(j).setZero();
            continue;
        }
        const Eigen::VectorXd c = qr.solve(rhs);
        if ((stacked * c - rhs).norm() > tol * scale) return false;
        coarse.row(j) = c.transpose();
    }
    return true;
}

}  // namespace

TensorizedFunction coarsen_to_minimal(const TensorizedFunction& tf, double tol) {
    CoeffMatrix cur = tf.coeffs();
    int level = tf.level();
    CoeffMatrix next;
    while (level > 0 && coarsen_once(tf.space(), cur, tol, next)) {
        cur = std::move(next);
        --level;
    }
    return {tf.space_ptr(), level, std::move(cur)};
}

int minimal_level(const TensorizedFunction& tf, double tol) {
    return coarsen_to_minimal(tf, tol).level();
}

TensorizedFunction reproject(const TensorizedFunction& tf, const PolySpacePtr& target) {
    if (target->base() != tf.base()) throw DomainError("reproject needs matching bases");
    if (target->degree() > tf.space().degree()) {
        throw DomainError("reproject target must not have higher degree");
    }
    CoeffMatrix c = tf.coeffs().leftCols(target->dim());
    return {target, tf.level(), std::move(c)};
}

TensorizedFunction subtract(const TensorizedFunction& a, const TensorizedFunction& b,
                            std::size_t budget) {
    if (!a.space().same_as(b.space())) throw DomainError("subtract needs matching local spaces");
    const int level = std::max(a.level(), b.level());
    TensorizedFunction fa = a.level() == level ? a : relevel_up(a, level, budget);
    const TensorizedFunction fb = b.level() == level ? b : relevel_up(b, level, budget);
    CoeffMatrix diff = fa.coeffs() - fb.coeffs();
    return {a.space_ptr(), level, std::move(diff)};
}

}  // namespace qtt
