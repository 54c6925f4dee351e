#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace qtt {

using RealFunction = std::function<double(double)>;

/// Polynomials of degree <= m on [0,1) in the orthonormal shifted Legendre basis
///   L_k(y) = sqrt(2k+1) P_k(2y - 1),  int_0^1 L_j L_k = delta_jk,
/// together with the b-adic dilation operators and the derivative operator in that basis.
///
/// Dilation: if c holds the coefficients of g, then D_i c holds those of y -> g((y + i)/b).
/// Both D_i and the derivative matrix are upper triangular; entries below the diagonal are exact
/// zeros so sparsity counts on derived cores are structural.
class PolySpace {
public:
    PolySpace(int degree, int base, int quadrature_order = 32);

    static std::shared_ptr<const PolySpace> make(int degree, int base, int quadrature_order = 32);

    int degree() const noexcept { return degree_; }
    int base() const noexcept { return base_; }
    int dim() const noexcept { return degree_ + 1; }
    int quadrature_order() const noexcept { return quadrature_order_; }

    const Eigen::MatrixXd& dilation(int digit) const;
    const Eigen::MatrixXd& diff_matrix() const noexcept { return diff_; }

    /// Column q holds the coefficients of y^q. Maps monomial coefficients to basis coefficients.
    const Eigen::MatrixXd& monomial_to_basis() const noexcept { return monomial_to_basis_; }

    /// (L_0(y), ..., L_m(y)); no range check.
    Eigen::VectorXd basis_values(double y) const;
    void basis_values(double y, double* out) const;

    /// sum_k c_k L_k(y) by the Legendre three-term recurrence; no range check.
    double evaluate(const Eigen::Ref<const Eigen::VectorXd>& c, double y) const;

    /// L2 projection coefficients <g, L_k> by Gauss-Legendre quadrature. order <= 0 uses the
    /// space's default order. Throws NumericError on a non-finite sample.
    Eigen::VectorXd project_coefficients(const RealFunction& g, int order = 0) const;

    /// Coefficients of the k-th derivative (exact zero when k > m).
    Eigen::VectorXd derivative_coefficients(const Eigen::Ref<const Eigen::VectorXd>& c,
                                            int k) const;

    bool same_as(const PolySpace& other) const noexcept {
        return degree_ == other.degree_ && base_ == other.base_;
    }

private:
    int degree_;
    int base_;
    int quadrature_order_;
    std::vector<Eigen::MatrixXd> dilations_;
    Eigen::MatrixXd diff_;
    Eigen::MatrixXd monomial_to_basis_;
};

using PolySpacePtr = std::shared_ptr<const PolySpace>;

/// Coefficients of one local piece in the space's orthonormal basis.
struct LocalCoeffs {
    PolySpacePtr space;
    Eigen::VectorXd values;
};

LocalCoeffs project(const PolySpacePtr& space, const RealFunction& g, int order = 0);

/// Throws DomainError when y is outside [0,1).
double eval(const LocalCoeffs& c, double y);

/// D_i c; throws DomainError for a digit outside {0..b-1}.
LocalCoeffs dilate(const LocalCoeffs& c, int digit);

LocalCoeffs differentiate(const LocalCoeffs& c, int k);

}  // namespace qtt
