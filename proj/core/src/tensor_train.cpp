#include "qtt/tensor_train.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "qtt/badic.hpp"
#include "qtt/fault.hpp"
#include "truncation.hpp"

namespace qtt {

Eigen::MatrixXd TTCore::left_unfolding() const {
    const int b = base();
    Eigen::MatrixXd m(rows() * b, cols());
    for (int i = 0; i < b; ++i)
        for (Eigen::Index k = 0; k < rows(); ++k) m.row(k * b + i) = slices[static_cast<std::size_t>(i)].row(k);
    return m;
}

TTCore TTCore::from_left_unfolding(const Eigen::Ref<const Eigen::MatrixXd>& m, int base) {
    TTCore core;
    const Eigen::Index rin = m.rows() / base;
    core.slices.assign(static_cast<std::size_t>(base), Eigen::MatrixXd(rin, m.cols()));
    for (int i = 0; i < base; ++i)
        for (Eigen::Index k = 0; k < rin; ++k) core.slices[static_cast<std::size_t>(i)].row(k) = m.row(k * base + i);
    return core;
}

Eigen::MatrixXd TTCore::right_unfolding() const {
    const int b = base();
    Eigen::MatrixXd m(rows(), cols() * b);
    for (int i = 0; i < b; ++i) m.middleCols(i * cols(), cols()) = slices[static_cast<std::size_t>(i)];
    return m;
}

TTCore TTCore::from_right_unfolding(const Eigen::Ref<const Eigen::MatrixXd>& m, int base) {
    TTCore core;
    const Eigen::Index rout = m.cols() / base;
    core.slices.reserve(static_cast<std::size_t>(base));
    for (int i = 0; i < base; ++i) core.slices.emplace_back(m.middleCols(i * rout, rout));
    return core;
}

TensorTrain::TensorTrain(PolySpacePtr space, std::vector<TTCore> cores, Eigen::MatrixXd tail)
    : space_(std::move(space)), cores_(std::move(cores)), tail_(std::move(tail)) {
    if (!space_) throw DomainError("TensorTrain needs a local space");
    Eigen::Index r = 1;
    for (std::size_t nu = 0; nu < cores_.size(); ++nu) {
        const TTCore& c = cores_[nu];
        if (c.base() != space_->base()) {
            throw DomainError("core " + std::to_string(nu + 1) + " has " + std::to_string(c.base()) +
                              " slices, expected " + std::to_string(space_->base()));
        }
        for (const auto& s : c.slices) {
            if (s.rows() != r || s.cols() != c.cols() || s.cols() < 1) {
                throw DomainError("inconsistent rank chain at core " + std::to_string(nu + 1));
            }
        }
        r = c.cols();
    }
    if (tail_.rows() != r || tail_.cols() != space_->dim()) {
        throw DomainError("tail shape " + std::to_string(tail_.rows()) + "x" +
                          std::to_string(tail_.cols()) + " does not match r_d x dim S = " +
                          std::to_string(r) + "x" + std::to_string(space_->dim()));
    }
}

TensorTrain TensorTrain::zero(PolySpacePtr space, int level) {
    std::vector<TTCore> cores(static_cast<std::size_t>(level));
    for (auto& c : cores) c.slices.assign(static_cast<std::size_t>(space->base()), Eigen::MatrixXd::Zero(1, 1));
    Eigen::MatrixXd tail = Eigen::MatrixXd::Zero(1, space->dim());
    return {std::move(space), std::move(cores), std::move(tail)};
}

std::vector<int> TensorTrain::ranks() const {
    std::vector<int> r;
    r.reserve(cores_.size());
    for (const auto& c : cores_) r.push_back(static_cast<int>(c.cols()));
    return r;
}

int TensorTrain::max_rank() const {
    int r = 1;
    for (const auto& c : cores_) r = std::max(r, static_cast<int>(c.cols()));
    return r;
}

Features feature_map(double x, const PolySpace& space, int level) {
    const BaseBCoordinate c = encode(x, space.base(), level);
    return {c.digits, space.basis_values(c.remainder)};
}

double TensorTrain::eval(double x) const {
    const Features phi = feature_map(x, *space_, level());
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    for (std::size_t nu = 0; nu < cores_.size(); ++nu)
        v = v * cores_[nu].slices[static_cast<std::size_t>(phi.digits[nu])];
    return (v * tail_ * phi.local)(0, 0);
}

double eval(const TensorTrain& tt, double x) { return tt.eval(x); }

double TensorTrain::norm() const {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Ones(1, 1);
    for (const auto& c : cores_) {
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(c.cols(), c.cols());
        for (const auto& s : c.slices) next.noalias() += s.transpose() * gram * s;
        // the cell width b^-d is applied one digit at a time
        gram = next / static_cast<double>(c.base());
    }
    const double sq = (tail_.transpose() * gram * tail_).trace();
    return std::sqrt(std::max(0.0, sq));
}

RankProfile train_rank_profile(const TensorTrain& tt) {
    return {tt.level(), tt.ranks(), 0.0};
}

namespace detail {

double step_tolerance(double tol, double norm, int steps) {
    if (steps <= 0) return 0.0;
    if (fault::disable_tolerance_split()) return tol * norm;
    return tol * norm / std::sqrt(static_cast<double>(steps));
}

Eigen::Index choose_rank(const Eigen::VectorXd& s, double delta, int cap) {
    Eigen::Index r = s.size();
    if (r == 0 || s[0] == 0.0) return 1;
    while (r > 1 && s[r - 1] <= kZeroSingularValue * s[0]) --r;
    double tail = 0.0;
    while (r > 1 && tail + s[r - 1] * s[r - 1] <= delta * delta) {
        tail += s[r - 1] * s[r - 1];
        --r;
    }
    if (cap > 0) r = std::min<Eigen::Index>(r, cap);
    return std::max<Eigen::Index>(r, 1);
}

SvdFactors truncated_svd(const Eigen::Ref<const Eigen::MatrixXd>& m, double delta, int cap) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericError("SVD did not converge");
    const Eigen::VectorXd& s = svd.singularValues();
    const Eigen::Index r = choose_rank(s, delta, cap);
    SvdFactors out;
    if (s.size() == 0 || s[0] == 0.0) {
        out.u = Eigen::MatrixXd::Zero(m.rows(), 1);
        out.sv = Eigen::MatrixXd::Zero(1, m.cols());
        return out;
    }
    out.u = svd.matrixU().leftCols(r);
    out.sv = s.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
    return out;
}

int cap_at(const std::vector<int>& caps, std::size_t nu) {
    return caps.empty() ? 0 : caps[nu];
}

void check_caps(const std::vector<int>& caps, int level) {
    if (caps.empty()) return;
    if (static_cast<int>(caps.size()) != level) {
        throw DomainError("rank_caps needs one entry per bond (" + std::to_string(level) + ")");
    }
    for (int c : caps)
        if (c < 1) throw DomainError("rank caps must be positive");
}

}  // namespace detail

TensorTrain tt_svd(const TensorizedFunction& tf, double tol, const std::vector<int>& rank_caps) {
    if (!(tol >= 0.0)) throw DomainError("tolerance must be >= 0");
    const int d = tf.level();
    detail::check_caps(rank_caps, d);
    const int b = tf.base();
    const double frob = tf.coeffs().norm();
    if (d == 0) return {tf.space_ptr(), {}, Eigen::MatrixXd(tf.coeffs())};
    if (frob == 0.0) return TensorTrain::zero(tf.space_ptr(), d);

    const double delta = detail::step_tolerance(tol, frob, d);
    std::vector<TTCore> cores;
    cores.reserve(static_cast<std::size_t>(d));
    // W holds the not-yet-decomposed part as r_{nu-1} x (b^{d-nu+1} (m+1)), row-major.
    RowMatrix w = Eigen::Map<const RowMatrix>(tf.coeffs().data(), 1, tf.coeffs().size());
    for (int nu = 1; nu <= d; ++nu) {
        const Eigen::Index rows = w.rows() * b;
        const Eigen::Index cols = w.size() / rows;
        const Eigen::Map<const RowMatrix> m(w.data(), rows, cols);
        detail::SvdFactors f = detail::truncated_svd(m, delta, detail::cap_at(rank_caps, static_cast<std::size_t>(nu - 1)));
        cores.push_back(TTCore::from_left_unfolding(f.u, b));
        w = f.sv;
    }
    return {tf.space_ptr(), std::move(cores), Eigen::MatrixXd(w)};
}

TensorizedFunction to_full(const TensorTrain& tt, std::size_t budget) {
    require_budget(tt.base(), tt.level(), tt.dim(), budget);
    const int b = tt.base();
    RowMatrix p = RowMatrix::Ones(1, 1);
    for (const auto& core : tt.cores()) {
        RowMatrix next(p.rows() * b, core.cols());
        for (int i = 0; i < b; ++i) {
            const Eigen::MatrixXd block = p * core.slices[static_cast<std::size_t>(i)];
            for (Eigen::Index r = 0; r < p.rows(); ++r) next.row(r * b + i) = block.row(r);
        }
        p = std::move(next);
    }
    CoeffMatrix c = p * tt.tail();
    return {tt.space_ptr(), tt.level(), std::move(c)};
}

}  // namespace qtt
