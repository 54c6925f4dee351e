#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qtt/complexity.hpp"
#include "qtt/local_space.hpp"
#include "qtt/tensor_train.hpp"

namespace qtt {

/// Named test function. degree >= 0 marks a polynomial of that degree; aligned_level >= 0 marks
/// a piecewise constant with breakpoints on that level's grid.
struct CorpusFunction {
    std::string name;
    RealFunction f;
    int degree = -1;
    int aligned_level = -1;
    std::vector<double> singular_points;
    bool smooth = false;
};

/// Polynomials x^q, trigonometric, |x-c|^g, sqrt, indicators and a staircase.
std::vector<CorpusFunction> function_corpus();

/// Independent reference for ||f||_p: [0,1) is cut into `pieces` equal subintervals (pass a
/// multiple of the cell count so kinks sit on cut points), sign changes are bracketed by
/// sampling and bisected, and every sign-definite piece is integrated by 20-point Gauss. p = inf
/// uses dense sampling plus golden-section refinement.
double reference_norm(const RealFunction& f, double p, std::size_t pieces);

/// Gaussian cores with r_nu drawn uniformly from {1..min(max_rank, b^nu, b^{d-nu} dim S)}.
TensorTrain random_train(const PolySpacePtr& space, int level, int max_rank, std::mt19937_64& rng);

/// Random member of V_{b,d,S} with Gaussian coefficients.
TensorizedFunction random_member(const PolySpacePtr& space, int level, std::mt19937_64& rng);

// Closure under addition.

struct P4Sample {
    int level_a = 0, level_b = 0;
    std::int64_t n_N = 0, n_C = 0, n_S = 0;
    std::int64_t sum_N = 0, sum_C = 0, sum_S = 0;
    double ratio_N = 0, ratio_C = 0, ratio_S = 0;
};

struct P4Bounds {
    double N = 0, C = 0, S = 0;
};

/// 2 + dim S, (dim S)^2 + 3 dim S + 2b + 2, b + 1 + b^2 (dim S)^3.
P4Bounds p4_bounds(int base, int dim);

/// n_X = max(cost_X(a), cost_X(b)) on the canonical inputs. N and C are measured on the canonical
/// form of the sum, S on the unrounded block sum of the canonical inputs. Pairs with n = 0 give
/// ratio 0.
P4Sample p4_sample(const TensorTrain& a, const TensorTrain& b);

std::vector<P4Sample> p4_study(const PolySpacePtr& space, int pairs, int max_level, std::uint64_t seed);

// The max-rank counterexample.

struct MaxRankPoint {
    std::int64_t n = 0;
    int level_a = 0, level_b = 0;
    int rmax_a = 0, rmax_sum = 0;
    std::int64_t cost_a = 0, cost_b = 0, cost_sum = 0;
    double ratio = 0;  // cost_rmax(sum) / n
    P4Sample other;    // N, C, S growth on the same pair
};

/// level_a = floor(W0(n ln b / (2 max(b, dim S))) / ln b), level_b = floor((n - dim S) / b).
int maxrank_level_a(std::int64_t n, int base, int dim);
int maxrank_level_b(std::int64_t n, int base, int dim);

/// Full-rank piecewise constant at level_a (rank b^{floor(d/2)} in the middle).
TensorTrain maxrank_full(const PolySpacePtr& space, int level, std::mt19937_64& rng);
/// Indicator of [0, b^-d), scaled by b^{d/2} to unit L2 norm so rounding the sum with a deep
/// partner keeps it. Every factor sqrt(b) sits in its own core.
TensorTrain first_cell_indicator(const PolySpacePtr& space, int level);

/// Budgets near 64 * 2^k, k = 0..count-1, moved to n = b * floor(64 * 2^k / b) + dim S so the
/// rank-one partner's level (n - dim S) / b involves no rounding.
std::vector<std::int64_t> maxrank_grid(int base, int dim, int count);

MaxRankPoint maxrank_point(const PolySpacePtr& space, std::int64_t n, std::mt19937_64& rng);
std::vector<MaxRankPoint> maxrank_sweep(const PolySpacePtr& space, const std::vector<std::int64_t>& ns,
                                        std::uint64_t seed);

// Verification report.

struct LemmaResult {
    std::string lemma;
    bool passed = true;
    double constant_paper = 0.0;
    double constant_measured = 0.0;
    std::string worst_case_inputs;
    std::size_t cases = 0;
};

struct VerificationReport {
    std::vector<LemmaResult> results;

    bool all_passed() const;
    std::vector<std::string> failures() const;
};

/// Array of {lemma, status, constant_paper, constant_measured, worst_case_inputs}.
std::string to_json(const VerificationReport& report);

struct CorpusConfig {
    int base = 2;
    std::vector<int> degrees{0, 1, 3};
    int max_level = 10;
    std::uint64_t seed = 0;
    int pairs = 200;
};

/// Runs every property suite over the corpus. No degrees means nothing to check and a pass.
VerificationReport lemma_corpus(const CorpusConfig& config = {});

}  // namespace qtt
