#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qtt/errors.hpp"
#include "qtt/local_space.hpp"

namespace qtt {

/// Row-major b^d x (m+1) matrix: row j = sum_k i_k b^{d-k} holds the basis coefficients of the
/// local piece y -> f(b^{-d}(j + y)). Flattened, this is the (d+1)-order coefficient tensor with
/// i_1 slowest and the local mode last.
using CoeffMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A function of V_{b,d,S} held as its full coefficient tensor.
class TensorizedFunction {
public:
    TensorizedFunction(PolySpacePtr space, int level, CoeffMatrix coeffs);

    static TensorizedFunction zeros(PolySpacePtr space, int level,
                                    std::size_t budget = kDefaultElementBudget);

    int base() const noexcept { return space_->base(); }
    int level() const noexcept { return level_; }
    int dim() const noexcept { return space_->dim(); }
    std::size_t cells() const noexcept { return static_cast<std::size_t>(coeffs_.rows()); }
    std::size_t elements() const noexcept { return static_cast<std::size_t>(coeffs_.size()); }

    const PolySpace& space() const noexcept { return *space_; }
    const PolySpacePtr& space_ptr() const noexcept { return space_; }
    const CoeffMatrix& coeffs() const noexcept { return coeffs_; }

    /// Throws DomainError outside [0,1).
    double eval(double x) const;

private:
    PolySpacePtr space_;
    int level_;
    CoeffMatrix coeffs_;
};

/// Numerical prefix ranks r_nu, nu = 1..level.
struct RankProfile {
    int level = 0;
    std::vector<int> ranks;
    double tolerance = 1e-10;
};

struct TensorizeOptions {
    /// Per-cell Gauss order; <= 0 uses the space default.
    int quadrature_order = 0;
    /// Cells containing one of these points use twice the quadrature order.
    std::vector<double> singular_points;
    std::size_t budget = kDefaultElementBudget;
};

/// Cell-wise L2 projection I_{b,d,S} f.
TensorizedFunction tensorize(const RealFunction& f, int level, const PolySpacePtr& space,
                             const TensorizeOptions& options = {});

double eval(const TensorizedFunction& tf, double x);

/// L^p norm for p in (0, inf]; pass std::numeric_limits<double>::infinity() for the sup norm.
double lp_norm(const TensorizedFunction& tf, double p);

/// Broken W^{k,p} seminorm: the L^p norm of the cell-wise k-th derivative.
double sobolev_seminorm(const TensorizedFunction& tf, int k, double p);

/// Counts singular values of the b^nu x b^{d-nu}(m+1) unfolding above tol * sigma_1.
RankProfile rank_profile(const TensorizedFunction& tf, double tol = 1e-10);

/// Singular values of the nu-th unfolding, descending.
Eigen::VectorXd unfolding_singular_values(const TensorizedFunction& tf, int nu);

/// Restriction to the cell selected by the leading digits (j_1..j_nu), rescaled to [0,1).
TensorizedFunction partial_eval(const TensorizedFunction& tf, std::span<const int> digits);

/// Same function represented at a finer level, through the dilation matrices.
TensorizedFunction relevel_up(const TensorizedFunction& tf, int new_level,
                              std::size_t budget = kDefaultElementBudget);

/// Smallest level at which tf is still representable: coarsening to level l-1 is admissible
/// when, on every coarse cell, the b children solve D_i c = c_i for a common c with relative
/// least-squares residual <= tol.
int minimal_level(const TensorizedFunction& tf, double tol = 1e-10);

/// The representation at minimal_level(tf, tol).
TensorizedFunction coarsen_to_minimal(const TensorizedFunction& tf, double tol = 1e-10);

/// L2 projection onto a lower-degree space with the same base (coefficient truncation in the
/// nested orthonormal basis).
TensorizedFunction reproject(const TensorizedFunction& tf, const PolySpacePtr& target);

/// Pointwise difference a - b at the finer of the two levels.
TensorizedFunction subtract(const TensorizedFunction& a, const TensorizedFunction& b,
                            std::size_t budget = kDefaultElementBudget);

/// int_0^1 |g|^p for one local polynomial; roots are located and the interval split so the
/// quadrature never straddles a kink.
double local_lp_pow(const PolySpace& space, const Eigen::Ref<const Eigen::VectorXd>& c, double p);

/// max_{[0,1]} |g| for one local polynomial.
double local_sup(const PolySpace& space, const Eigen::Ref<const Eigen::VectorXd>& c);

/// Throws BudgetError if b^level * dim exceeds the budget; returns the element count otherwise.
std::size_t require_budget(int base, int level, int dim, std::size_t budget);

// File formats.

/// Binary: "QTTF", u32 b, u32 d, u32 m, u8 basis id (0 = orthonormal Legendre), then
/// b^d (m+1) little-endian f64 in row-major cell order.
void write_qttf(const TensorizedFunction& tf, const std::string& path);
TensorizedFunction read_qttf(const std::string& path);

/// CSV with header "j,k,value".
void write_coeff_csv(const TensorizedFunction& tf, const std::string& path);

/// CSV with header "nu,r_nu".
void write_rank_csv(const RankProfile& profile, const std::string& path);

}  // namespace qtt
