#pragma once

// Reference computations for the tests. Nothing here calls into the library's numerics: dense
// SVDs go through JacobiSVD (the library uses BDCSVD), integrals through Boost's adaptive
// Gauss-Kronrod, basis values through Boost's Legendre polynomials.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

namespace oracle {

using Fn = std::function<double(double)>;

inline double integrate(const Fn& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

/// int_0^1 |f|^p, split at the given interior points.
inline double lp_pow(const Fn& f, double p, std::vector<double> cuts = {}) {
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(1.0);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] > cuts[k])
            s += integrate([&](double x) { return std::pow(std::abs(f(x)), p); }, cuts[k], cuts[k + 1]);
    }
    return s;
}

/// sqrt(2k+1) P_k(2y-1).
inline double legendre(int k, double y) {
    return std::sqrt(2.0 * k + 1.0) * boost::math::legendre_p(k, 2.0 * y - 1.0);
}

/// <g, L_k> on [0,1) by adaptive quadrature.
inline Eigen::VectorXd project(const Fn& g, int degree) {
    Eigen::VectorXd c(degree + 1);
    for (int k = 0; k <= degree; ++k) c[k] = integrate([&](double y) { return g(y) * legendre(k, y); }, 0.0, 1.0);
    return c;
}

inline double eval_local(const Eigen::VectorXd& c, double y) {
    double s = 0.0;
    for (int k = 0; k < c.size(); ++k) s += c[k] * legendre(k, y);
    return s;
}

/// Coefficient tensor of f at level d, cell rows in lexicographic digit order.
inline Eigen::MatrixXd coeff_tensor(const Fn& f, int base, int level, int degree) {
    const long cells = std::lround(std::pow(base, level));
    const double h = 1.0 / static_cast<double>(cells);
    Eigen::MatrixXd c(cells, degree + 1);
    for (long j = 0; j < cells; ++j)
        c.row(j) = project([&](double y) { return f((static_cast<double>(j) + y) * h); }, degree).transpose();
    return c;
}

/// Singular values of the nu-th unfolding of a cell-major coefficient matrix.
inline Eigen::VectorXd unfolding_sv(const Eigen::MatrixXd& coeffs, int base, int nu) {
    const long rows = std::lround(std::pow(base, nu));
    const long total = coeffs.size();
    Eigen::MatrixXd flat(1, total);
    long k = 0;
    for (long j = 0; j < coeffs.rows(); ++j)
        for (long q = 0; q < coeffs.cols(); ++q) flat(0, k++) = coeffs(j, q);
    Eigen::MatrixXd m(rows, total / rows);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < total / rows; ++c) m(r, c) = flat(0, r * (total / rows) + c);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues();
}

inline int numerical_rank(const Eigen::VectorXd& s, double tol) {
    if (s.size() == 0 || s[0] == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i) r += s[i] > tol * s[0];
    return r;
}

inline std::vector<int> rank_profile(const Eigen::MatrixXd& coeffs, int base, int level, double tol = 1e-10) {
    std::vector<int> r;
    for (int nu = 1; nu <= level; ++nu) r.push_back(numerical_rank(unfolding_sv(coeffs, base, nu), tol));
    return r;
}

/// Least-squares slope of y against x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
