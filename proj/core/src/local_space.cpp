#include "qtt/local_space.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "qtt/badic.hpp"
#include "qtt/errors.hpp"
#include "qtt/quadrature.hpp"

namespace qtt {

namespace {

// L_k(y) and L_k'(y) for k = 0..m at one point.
void legendre_with_derivative(int m, double y, double* val, double* der) {
    const double t = 2.0 * y - 1.0;
    double p_prev = 1.0, p = t;
    double dp_prev = 0.0, dp = 1.0;
    for (int k = 0; k <= m; ++k) {
        double pk, dpk;
        if (k == 0) {
            pk = 1.0;
            dpk = 0.0;
        } else if (k == 1) {
            pk = t;
            dpk = 1.0;
        } else {
            const double pn = ((2.0 * k - 1.0) * t * p - (k - 1.0) * p_prev) / k;
            const double dpn = dp_prev + (2.0 * k - 1.0) * p;
            p_prev = p;
            p = pn;
            dp_prev = dp;
            dp = dpn;
            pk = pn;
            dpk = dpn;
        }
        const double s = std::sqrt(2.0 * k + 1.0);
        val[k] = s * pk;
        if (der) der[k] = 2.0 * s * dpk;
    }
}

}  // namespace

PolySpace::PolySpace(int degree, int base, int quadrature_order)
    : degree_(degree), base_(base), quadrature_order_(quadrature_order) {
    if (degree < 0) throw DomainError("polynomial degree must be >= 0");
    require_base(base);
    if (quadrature_order < 1) throw DomainError("quadrature order must be >= 1");

    const int n = dim();
    // 2m is the highest degree integrated while building the operators.
    const GaussRule& rule = gauss_legendre(std::max(quadrature_order_, n + 1));
    std::vector<double> phi(static_cast<std::size_t>(n)), dphi(static_cast<std::size_t>(n)),
        shifted(static_cast<std::size_t>(n));

    dilations_.assign(static_cast<std::size_t>(base_), Eigen::MatrixXd::Zero(n, n));
    diff_ = Eigen::MatrixXd::Zero(n, n);
    monomial_to_basis_ = Eigen::MatrixXd::Zero(n, n);

    for (int g = 0; g < rule.order(); ++g) {
        const double y = rule.nodes[static_cast<std::size_t>(g)];
        const double w = rule.weights[static_cast<std::size_t>(g)];
        legendre_with_derivative(degree_, y, phi.data(), dphi.data());
        for (int i = 0; i < base_; ++i) {
            legendre_with_derivative(degree_, (y + i) / base_, shifted.data(), nullptr);
            auto& D = dilations_[static_cast<std::size_t>(i)];
            for (int q = 0; q < n; ++q)
                for (int r = 0; r <= q; ++r) D(r, q) += w * shifted[q] * phi[r];
        }
        double mono = 1.0;
        for (int q = 0; q < n; ++q) {
            for (int r = 0; r < q; ++r) diff_(r, q) += w * dphi[q] * phi[r];
            for (int r = 0; r <= q; ++r) monomial_to_basis_(r, q) += w * mono * phi[r];
            mono *= y;
        }
    }
}

std::shared_ptr<const PolySpace> PolySpace::make(int degree, int base, int quadrature_order) {
    return std::make_shared<const PolySpace>(degree, base, quadrature_order);
}

const Eigen::MatrixXd& PolySpace::dilation(int digit) const {
    if (digit < 0 || digit >= base_) {
        throw DomainError("dilation digit " + std::to_string(digit) + " outside {0.." +
                          std::to_string(base_ - 1) + "}");
    }
    return dilations_[static_cast<std::size_t>(digit)];
}

Eigen::VectorXd PolySpace::basis_values(double y) const {
    Eigen::VectorXd v(dim());
    basis_values(y, v.data());
    return v;
}

void PolySpace::basis_values(double y, double* out) const {
    legendre_with_derivative(degree_, y, out, nullptr);
}

double PolySpace::evaluate(const Eigen::Ref<const Eigen::VectorXd>& c, double y) const {
    const double t = 2.0 * y - 1.0;
    double p_prev = 1.0, p = t;
    double acc = c[0];
    if (degree_ >= 1) acc += std::sqrt(3.0) * c[1] * t;
    for (int k = 2; k <= degree_; ++k) {
        const double pn = ((2.0 * k - 1.0) * t * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = pn;
        acc += std::sqrt(2.0 * k + 1.0) * c[k] * pn;
    }
    return acc;
}

Eigen::VectorXd PolySpace::project_coefficients(const RealFunction& g, int order) const {
    const GaussRule& rule = gauss_legendre(order > 0 ? order : quadrature_order_);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim());
    std::vector<double> phi(static_cast<std::size_t>(dim()));
    for (int q = 0; q < rule.order(); ++q) {
        const double y = rule.nodes[static_cast<std::size_t>(q)];
        const double v = g(y);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "non-finite function value " << v << " at quadrature node y = " << y;
            throw NumericError(msg.str());
        }
        basis_values(y, phi.data());
        const double w = rule.weights[static_cast<std::size_t>(q)] * v;
        for (int k = 0; k < dim(); ++k) c[k] += w * phi[static_cast<std::size_t>(k)];
    }
    return c;
}

Eigen::VectorXd PolySpace::derivative_coefficients(const Eigen::Ref<const Eigen::VectorXd>& c,
                                                   int k) const {
    if (k < 0) throw DomainError("derivative order must be >= 0");
    if (k > degree_) return Eigen::VectorXd::Zero(dim());
    Eigen::VectorXd out = c;
    for (int i = 0; i < k; ++i) out = diff_ * out;
    return out;
}

LocalCoeffs project(const PolySpacePtr& space, const RealFunction& g, int order) {
    return {space, space->project_coefficients(g, order)};
}

double eval(const LocalCoeffs& c, double y) {
    if (!(y >= 0.0 && y < 1.0)) throw DomainError("y = " + std::to_string(y) + " outside [0,1)");
    return c.space->evaluate(c.values, y);
}

LocalCoeffs dilate(const LocalCoeffs& c, int digit) {
    return {c.space, c.space->dilation(digit) * c.values};
}

LocalCoeffs differentiate(const LocalCoeffs& c, int k) {
    return {c.space, c.space->derivative_coefficients(c.values, k)};
}

}  // namespace qtt
