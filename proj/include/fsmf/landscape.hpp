#pragma once

#include <functional>
#include <optional>

#include "fsmf/problem.hpp"
#include "fsmf/support_analysis.hpp"

namespace fsmf {

/// Continuous curve t in [0,1] -> factor pair; checked by dense sampling.
struct FeasiblePath {
    std::function<FactorPair(double)> sampler;
    int sample_count = 1024;
};

/// Valley-barrier curve: infimum of the loss over the slice where the
/// off-column coordinate at the doubly-covered cell equals sigma, for the
/// canonical target [[1,1],[1,0]]. Closed form
/// 2 (sigma+1)^2 / ((sigma^2+3) + sqrt((sigma^2+3)^2 - 4 (sigma+1)^2)).
double g_sigma(double sigma);

/// The same value computed independently: the squared loss of the best
/// rank-one approximation of [[1,1],[1,-sigma]] via the characteristic
/// polynomial of the Gram matrix.
double g_sigma_oracle(double sigma);

/// Best rank-one approximation loss of an arbitrary 2x2 matrix (squared
/// Frobenius), again via the Gram characteristic polynomial.
double rank_one_loss_2x2(double a11, double a12, double a21, double a22);

/// Sum over columns p != witness.k of X(i2, p) * Y(j2, p).
double sigma_coordinate(const FactorPair& factors, const SpuriousWitness& witness);

/// The target [[1,1],[1,0]] placed at the witness cells inside an m x n
/// zero matrix, with minimal supports realizing the witness condition. The
/// in-valley point attains the slice infimum g(5); the optimum has loss 0.
struct SpuriousValleyInstance {
    ProblemInstance instance;
    FactorPair in_valley;
    FactorPair optimum;
    SpuriousWitness witness;  // 0-based
    int partner_column;       // the second column covering (i2, j2)
};

SpuriousValleyInstance build_spurious_valley_instance(int m, int n, int r,
                                                      const SpuriousWitness& witness);

/// The target diag(b, a) with a > b > 0 under 2x2 lower-triangular
/// supports; the returned point is a critical point with loss exactly b^2
/// while the optimum reaches 0.
struct SpuriousMinimumInstance {
    ProblemInstance instance;
    FactorPair spurious_min;
    FactorPair optimum;
};

SpuriousMinimumInstance build_spurious_minimum_instance(double a, double b);

/// The two-segment path ((1-2t) X0 + 2t X*, 0) then (X*, (2t-1) Y*): flat
/// at ||A||^2 on the first half, nonincreasing on the second.
FeasiblePath smart_init_path(const ProblemInstance& instance, const FactorPair& opt,
                             const DenseMatrix& start_x, int sample_count = 1024);

struct PathCheck {
    bool feasible = true;
    bool monotone = true;
    double max_violation = 0.0;              // largest loss increase between samples
    std::optional<double> first_infeasible_t;
};

/// Samples the path uniformly; verifies support feasibility everywhere and
/// loss monotonicity up to 1e-10.
PathCheck check_path(const FeasiblePath& path, const ProblemInstance& instance);

}  // namespace fsmf
