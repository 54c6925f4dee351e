#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qtt/errors.hpp"
#include "qtt/local_space.hpp"
#include "qtt/tensorized.hpp"

namespace qtt {

/// Row-major dense matrix; reshapes between unfoldings are free on this layout.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Digit core v_nu: one r_{nu-1} x r_nu matrix per digit value.
struct TTCore {
    std::vector<Eigen::MatrixXd> slices;

    int base() const noexcept { return static_cast<int>(slices.size()); }
    Eigen::Index rows() const noexcept { return slices.empty() ? 0 : slices.front().rows(); }
    Eigen::Index cols() const noexcept { return slices.empty() ? 0 : slices.front().cols(); }

    /// (r_in * b) x r_out, row index k * b + i.
    Eigen::MatrixXd left_unfolding() const;
    static TTCore from_left_unfolding(const Eigen::Ref<const Eigen::MatrixXd>& m, int base);

    /// r_in x (b * r_out), column index i * r_out + k.
    Eigen::MatrixXd right_unfolding() const;
    static TTCore from_right_unfolding(const Eigen::Ref<const Eigen::MatrixXd>& m, int base);
};

/// Tensor train over V_{b,d,S}:
///   f(i_1..i_d, y) = v_1(i_1) v_2(i_2) ... v_d(i_d) V_{d+1} (L_0(y), ..., L_m(y))^T
/// with v_1(i) of size 1 x r_1 and the tail V_{d+1} of size r_d x (m+1). At level 0 the tail is
/// a single 1 x (m+1) row.
class TensorTrain {
public:
    TensorTrain(PolySpacePtr space, std::vector<TTCore> cores, Eigen::MatrixXd tail);

    /// Structural rank-one train with zero cores.
    static TensorTrain zero(PolySpacePtr space, int level);

    int base() const noexcept { return space_->base(); }
    int level() const noexcept { return static_cast<int>(cores_.size()); }
    int dim() const noexcept { return space_->dim(); }
    const PolySpace& space() const noexcept { return *space_; }
    const PolySpacePtr& space_ptr() const noexcept { return space_; }

    const std::vector<TTCore>& cores() const noexcept { return cores_; }
    const Eigen::MatrixXd& tail() const noexcept { return tail_; }

    /// (r_1, ..., r_d).
    std::vector<int> ranks() const;
    int max_rank() const;

    /// Contracts with the feature vector of x; never forms the full tensor.
    double eval(double x) const;

    /// L2([0,1)) norm, i.e. b^{-d/2} times the Frobenius norm of the coefficient tensor.
    double norm() const;

private:
    PolySpacePtr space_;
    std::vector<TTCore> cores_;
    Eigen::MatrixXd tail_;
};

/// Feature map of x at level d: the digit indicators (stored as digits) and the local basis
/// values at the remainder.
struct Features {
    std::vector<int> digits;
    Eigen::VectorXd local;
};

Features feature_map(double x, const PolySpace& space, int level);

double eval(const TensorTrain& tt, double x);

/// Left-to-right SVD sweep. Each of the d truncations discards at most (tol/sqrt(d)) ||tf|| in
/// Frobenius norm, so the total error is <= tol ||tf||. Singular values below 1e-13 sigma_1 are
/// always dropped. rank_caps, when given, holds one cap per bond.
TensorTrain tt_svd(const TensorizedFunction& tf, double tol, const std::vector<int>& rank_caps = {});

/// Full contraction; throws BudgetError when b^d (m+1) exceeds the budget.
TensorizedFunction to_full(const TensorTrain& tt, std::size_t budget = kDefaultElementBudget);

/// Block construction: first cores concatenated by columns, middle cores block diagonal, tails
/// stacked. A shallower operand is first lifted with extend_level. Ranks add exactly.
TensorTrain add(const TensorTrain& a, const TensorTrain& b);

TensorTrain scale(const TensorTrain& tt, double factor);

/// Right-to-left orthogonalization followed by a left-to-right truncation sweep under the same
/// tolerance accounting as tt_svd. Ranks never increase.
TensorTrain round(const TensorTrain& tt, double tol, const std::vector<int>& rank_caps = {});

/// Represents the same function at a finer level. Cores 1..d are kept; the tail is replaced by
/// a digit core carrying delta_{j}(i) v_{d+1}, followed by cores built from the dilation
/// matrices. New ranks are b*dim S at d+1 and (dim S)^2 beyond; a rounding pass brings them down
/// to at most dim S.
TensorTrain extend_level(const TensorTrain& tt, int new_level);

// File formats.

/// Binary: "QTTT", u32 b, u32 d, u32 m, u32 ranks[d], then the digit cores as little-endian f64,
/// each laid out (digit, in-rank, out-rank) row-major, then the r_d x (m+1) tail row-major.
void write_qttt(const TensorTrain& tt, const std::string& path);
TensorTrain read_qttt(const std::string& path);

RankProfile train_rank_profile(const TensorTrain& tt);

}  // namespace qtt
