#pragma once

#include <vector>

#include "fsmf/dense_matrix.hpp"

namespace fsmf {

/// Compact SVD A = U * diag(s) * V^T with U m x q, V n x q, q = min(m, n),
/// singular values sorted nonincreasing. Deterministic: cyclic one-sided
/// Jacobi sweeps on the smaller side, then a fixed sign convention (the
/// largest-magnitude entry of each left singular vector is positive, first
/// such entry on ties).
struct SvdResult {
    DenseMatrix U;
    DenseMatrix V;
    std::vector<double> singular_values;
};

SvdResult jacobi_svd(const DenseMatrix& a);

/// Largest singular value (0 for an empty matrix).
double operator_norm(const DenseMatrix& a);

/// Best rank-<=k approximant of A, factored so that U V^T is the
/// approximant (the singular values are split evenly between the sides).
/// `singular_values` keeps the full spectrum.
struct TruncatedSVDResult {
    DenseMatrix U;  // m x k
    DenseMatrix V;  // n x k
    std::vector<double> singular_values;

    DenseMatrix approximant() const;
    double tail_energy(int k) const;  // sum of squared singular values beyond k
};

TruncatedSVDResult truncated_svd(const DenseMatrix& a, int k);

}  // namespace fsmf
