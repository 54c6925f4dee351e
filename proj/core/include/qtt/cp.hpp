#pragma once

#include <vector>

#include <Eigen/Core>

#include "qtt/local_space.hpp"
#include "qtt/tensor_train.hpp"
#include "qtt/tensorized.hpp"

namespace qtt {

/// Canonical (sum of rank-one terms) representation
///   f(i_1..i_d, y) = sum_k w_1(i_1, k) ... w_d(i_d, k) sum_q local(q, k) L_q(y).
struct CPRep {
    PolySpacePtr space;
    std::vector<Eigen::MatrixXd> factors;  // d matrices, each b x r
    Eigen::MatrixXd local;                 // dim S x r

    int level() const noexcept { return static_cast<int>(factors.size()); }
    int rank() const noexcept { return static_cast<int>(local.cols()); }
};

/// Throws DomainError on inconsistent shapes or r < 1.
void validate(const CPRep& cp);

double eval(const CPRep& cp, double x);

/// Diagonal-core embedding: all TT ranks equal r, middle cores diagonal.
TensorTrain cp_to_tt(const CPRep& cp);

/// One rank-one term per nonzero cell (at least one term), so r <= b^d.
CPRep cellwise_cp(const TensorizedFunction& tf);

}  // namespace qtt
