#include "qtt/cp.hpp"

#include <string>

#include "qtt/badic.hpp"

namespace qtt {

void validate(const CPRep& cp) {
    if (!cp.space) throw DomainError("CP representation needs a local space");
    const Eigen::Index r = cp.local.cols();
    if (r < 1) throw DomainError("CP rank must be >= 1");
    if (cp.local.rows() != cp.space->dim()) {
        throw DomainError("CP local factor has " + std::to_string(cp.local.rows()) +
                          " rows, expected dim S = " + std::to_string(cp.space->dim()));
    }
    for (std::size_t nu = 0; nu < cp.factors.size(); ++nu) {
        const auto& w = cp.factors[nu];
        if (w.rows() != cp.space->base() || w.cols() != r) {
            throw DomainError("CP factor " + std::to_string(nu + 1) + " must be b x r");
        }
    }
}

double eval(const CPRep& cp, double x) {
    validate(cp);
    const Features phi = feature_map(x, *cp.space, cp.level());
    Eigen::RowVectorXd term = phi.local.transpose() * cp.local;
    for (std::size_t nu = 0; nu < cp.factors.size(); ++nu)
        term = term.cwiseProduct(cp.factors[nu].row(phi.digits[nu]));
    return term.sum();
}

TensorTrain cp_to_tt(const CPRep& cp) {
    validate(cp);
    const int d = cp.level();
    const int b = cp.space->base();
    if (d == 0) {
        Eigen::MatrixXd tail = cp.local.rowwise().sum().transpose();
        return {cp.space, {}, std::move(tail)};
    }
    std::vector<TTCore> cores(static_cast<std::size_t>(d));
    for (int nu = 0; nu < d; ++nu) {
        const auto& w = cp.factors[static_cast<std::size_t>(nu)];
        auto& core = cores[static_cast<std::size_t>(nu)];
        for (int i = 0; i < b; ++i) {
            if (nu == 0) {
                core.slices.emplace_back(w.row(i));
            } else {
                core.slices.emplace_back(w.row(i).transpose().asDiagonal());
            }
        }
    }
    return {cp.space, std::move(cores), cp.local.transpose()};
}

CPRep cellwise_cp(const TensorizedFunction& tf) {
    const int d = tf.level();
    const int b = tf.base();
    const auto& C = tf.coeffs();
    std::vector<std::size_t> cells;
    for (Eigen::Index j = 0; j < C.rows(); ++j)
        if (C.row(j).cwiseAbs().maxCoeff() > 0.0) cells.push_back(static_cast<std::size_t>(j));
    if (cells.empty()) cells.push_back(0);

    const auto r = static_cast<Eigen::Index>(cells.size());
    CPRep cp{tf.space_ptr(), std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(b, r)),
             Eigen::MatrixXd(tf.dim(), r)};
    for (Eigen::Index k = 0; k < r; ++k) {
        const std::size_t j = cells[static_cast<std::size_t>(k)];
        const std::vector<int> digits = cell_digits(j, b, d);
        for (int nu = 0; nu < d; ++nu) cp.factors[static_cast<std::size_t>(nu)](digits[static_cast<std::size_t>(nu)], k) = 1.0;
        cp.local.col(k) = C.row(static_cast<Eigen::Index>(j)).transpose();
    }
    return cp;
}

}  // namespace qtt
