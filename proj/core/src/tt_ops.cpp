#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>

#include "qtt/tensor_train.hpp"
#include "truncation.hpp"

namespace qtt {

namespace {

void require_same_space(const TensorTrain& a, const TensorTrain& b) {
    if (!a.space().same_as(b.space())) {
        throw DomainError("operands live on different local spaces");
    }
}

struct ThinQR {
    Eigen::MatrixXd q;
    Eigen::MatrixXd r;
};

ThinQR thin_qr(const Eigen::MatrixXd& m) {
    const Eigen::Index k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    ThinQR out;
    out.q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), k);
    out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    return out;
}

void multiply_right(TTCore& core, const Eigen::MatrixXd& m) {
    for (auto& s : core.slices) s = s * m;
}

}  // namespace

TensorTrain scale(const TensorTrain& tt, double factor) {
    return {tt.space_ptr(), tt.cores(), tt.tail() * factor};
}

TensorTrain add(const TensorTrain& a, const TensorTrain& b) {
    require_same_space(a, b);
    if (a.level() < b.level()) return add(extend_level(a, b.level()), b);
    if (b.level() < a.level()) return add(a, extend_level(b, a.level()));

    const int d = a.level();
    const int base = a.base();
    if (d == 0) return {a.space_ptr(), {}, a.tail() + b.tail()};

    std::vector<TTCore> cores(static_cast<std::size_t>(d));
    for (int nu = 0; nu < d; ++nu) {
        const TTCore& ca = a.cores()[static_cast<std::size_t>(nu)];
        const TTCore& cb = b.cores()[static_cast<std::size_t>(nu)];
        TTCore& out = cores[static_cast<std::size_t>(nu)];
        out.slices.resize(static_cast<std::size_t>(base));
        for (int i = 0; i < base; ++i) {
            const auto& sa = ca.slices[static_cast<std::size_t>(i)];
            const auto& sb = cb.slices[static_cast<std::size_t>(i)];
            Eigen::MatrixXd s;
            if (nu == 0) {
                s.resize(1, sa.cols() + sb.cols());
                s << sa, sb;
            } else {
                s = Eigen::MatrixXd::Zero(sa.rows() + sb.rows(), sa.cols() + sb.cols());
                s.topLeftCorner(sa.rows(), sa.cols()) = sa;
                s.bottomRightCorner(sb.rows(), sb.cols()) = sb;
            }
            out.slices[static_cast<std::size_t>(i)] = std::move(s);
        }
    }
    Eigen::MatrixXd tail(a.tail().rows() + b.tail().rows(), a.dim());
    tail << a.tail(), b.tail();
    return {a.space_ptr(), std::move(cores), std::move(tail)};
}

TensorTrain round(const TensorTrain& tt, double tol, const std::vector<int>& rank_caps) {
    if (!(tol >= 0.0)) throw DomainError("tolerance must be >= 0");
    const int d = tt.level();
    detail::check_caps(rank_caps, d);
    if (d == 0) return tt;
    const int b = tt.base();

    std::vector<TTCore> cores = tt.cores();
    Eigen::MatrixXd tail = tt.tail();

    // Right-to-left: make the tail and cores 2..d right-orthonormal. The carried factor is
    // renormalized at every step and its scale kept as a logarithm, so very deep trains do not
    // overflow.
    double log_scale = 0.0;
    auto renormalize = [&](TTCore& c) {
        double s = 0.0;
        for (const auto& m : c.slices) s = std::max(s, m.cwiseAbs().maxCoeff());
        if (s == 0.0 || !std::isfinite(s)) return s;
        for (auto& m : c.slices) m /= s;
        log_scale += std::log(s);
        return s;
    };
    // Estimated relative rounding noise: each step adds eps times how much smaller its product is
    // than its factors. Cancellation pushes it past 1, and then the train is zero to working precision.
    double noise = 0.0;
    auto carry = [&](TTCore& c, const Eigen::MatrixXd& r) {
        double before = 0.0;
        for (const auto& m : c.slices) before += m.squaredNorm();
        multiply_right(c, r.transpose());
        double after = 0.0;
        for (const auto& m : c.slices) after += m.squaredNorm();
        const double denom = std::sqrt(before) * r.norm();
        if (after == 0.0 || denom == 0.0) return false;
        noise += 64.0 * std::numeric_limits<double>::epsilon() * denom / std::sqrt(after);
        return noise < 1.0 && renormalize(c) != 0.0;
    };
    {
        ThinQR f = thin_qr(tail.transpose());
        tail = f.q.transpose();
        if (!carry(cores.back(), f.r)) return TensorTrain::zero(tt.space_ptr(), d);
    }
    for (int nu = d - 1; nu >= 1; --nu) {
        TTCore& c = cores[static_cast<std::size_t>(nu)];
        ThinQR f = thin_qr(c.right_unfolding().transpose());
        c = TTCore::from_right_unfolding(f.q.transpose(), b);
        if (!carry(cores[static_cast<std::size_t>(nu - 1)], f.r)) return TensorTrain::zero(tt.space_ptr(), d);
    }

    const double frob = cores.front().left_unfolding().norm();
    if (frob == 0.0) return TensorTrain::zero(tt.space_ptr(), d);
    const double delta = detail::step_tolerance(tol, frob, d);

    // Left-to-right truncation, carrying S V^T forward.
    for (int nu = 0; nu < d; ++nu) {
        TTCore& c = cores[static_cast<std::size_t>(nu)];
        detail::SvdFactors f = detail::truncated_svd(c.left_unfolding(), delta,
                                                     detail::cap_at(rank_caps, static_cast<std::size_t>(nu)));
        c = TTCore::from_left_unfolding(f.u, b);
        if (nu + 1 < d) {
            for (auto& s : cores[static_cast<std::size_t>(nu + 1)].slices) s = f.sv * s;
        } else {
            tail = f.sv * tail;
        }
    }
    // Spread the scale evenly over the cores and the tail.
    const double share = std::exp(log_scale / (d + 1));
    for (auto& c : cores)
        for (auto& m : c.slices) m *= share;
    tail *= share;
    return {tt.space_ptr(), std::move(cores), std::move(tail)};
}

TensorTrain extend_level(const TensorTrain& tt, int new_level) {
    const int d = tt.level();
    if (new_level < d) {
        throw DomainError("extend_level target " + std::to_string(new_level) + " is below level " +
                          std::to_string(d));
    }
    if (new_level == d) return tt;
    const int l = new_level - d;
    const int b = tt.base();
    const Eigen::Index ns = tt.dim();
    const PolySpace& space = tt.space();
    const Eigen::MatrixXd& v = tt.tail();
    const Eigen::Index rd = v.rows();

    std::vector<TTCore> cores = tt.cores();
    cores.reserve(static_cast<std::size_t>(new_level));

    // Core d+1: [k, (q, j)] = v[k, q] delta_{j, i}, flattened as q * b + j.
    {
        TTCore c;
        for (int i = 0; i < b; ++i) {
            Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rd, ns * b);
            for (Eigen::Index q = 0; q < ns; ++q) s.col(q * b + i) = v.col(q);
            c.slices.push_back(std::move(s));
        }
        cores.push_back(std::move(c));
    }

    if (l == 1) {
        Eigen::MatrixXd tail(ns * b, ns);
        for (int j = 0; j < b; ++j) {
            const Eigen::MatrixXd& dj = space.dilation(j);
            for (Eigen::Index q = 0; q < ns; ++q) tail.row(q * b + j) = dj.col(q).transpose();
        }
        return {tt.space_ptr(), std::move(cores), std::move(tail)};
    }

    // Core d+2: [(q, j), (q2, a2)] = delta_{q, q2} (D_i D_j)[a2, q].
    {
        TTCore c;
        for (int i = 0; i < b; ++i) {
            Eigen::MatrixXd s = Eigen::MatrixXd::Zero(ns * b, ns * ns);
            for (int j = 0; j < b; ++j) {
                const Eigen::MatrixXd dij = space.dilation(i) * space.dilation(j);
                for (Eigen::Index q = 0; q < ns; ++q)
                    for (Eigen::Index a = 0; a < ns; ++a) s(q * b + j, q * ns + a) = dij(a, q);
            }
            c.slices.push_back(std::move(s));
        }
        cores.push_back(std::move(c));
    }

    // Cores d+3..: [(q, a), (q, a')] = D_i[a', a].
    for (int nu = d + 3; nu <= new_level; ++nu) {
        TTCore c;
        for (int i = 0; i < b; ++i) {
            const Eigen::MatrixXd& di = space.dilation(i);
            Eigen::MatrixXd s = Eigen::MatrixXd::Zero(ns * ns, ns * ns);
            for (Eigen::Index q = 0; q < ns; ++q) s.block(q * ns, q * ns, ns, ns) = di.transpose();
            c.slices.push_back(std::move(s));
        }
        cores.push_back(std::move(c));
    }

    Eigen::MatrixXd tail = Eigen::MatrixXd::Zero(ns * ns, ns);
    for (Eigen::Index q = 0; q < ns; ++q) tail.block(q * ns, 0, ns, ns).setIdentity();
    return {tt.space_ptr(), std::move(cores), std::move(tail)};
}

}  // namespace qtt
