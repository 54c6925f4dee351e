#pragma once

#include <vector>

#include <Eigen/Core>

namespace qtt::detail {

// Relative level under which singular values count as numerical zeros.
inline constexpr double kZeroSingularValue = 1e-13;

struct SvdFactors {
    Eigen::MatrixXd u;   // m.rows() x r, orthonormal columns
    Eigen::MatrixXd sv;  // r x m.cols(), S V^T
};

double step_tolerance(double tol, double norm, int steps);
Eigen::Index choose_rank(const Eigen::VectorXd& s, double delta, int cap);
SvdFactors truncated_svd(const Eigen::Ref<const Eigen::MatrixXd>& m, double delta, int cap);
int cap_at(const std::vector<int>& caps, std::size_t nu);
void check_caps(const std::vector<int>& caps, int level);

}  // namespace qtt::detail
