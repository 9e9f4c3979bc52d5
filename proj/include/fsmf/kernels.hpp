#pragma once

#include "fsmf/dense_matrix.hpp"
#include "fsmf/support.hpp"

namespace fsmf::kernels {

// Dense inner loops, each in two variants: an OpenMP-parallel kernel (the
// default entry point) and a `_serial` reference implementation kept for
// testing. The parallel kernels assign each output cell to exactly one
// thread and run the same inner loop as the serial code, so the two
// variants agree bitwise except where noted (reductions).

/// C = A * B^T; A is m x r, B is n x r.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nt_serial(const DenseMatrix& a, const DenseMatrix& b);

/// C = A^T * B; A is m x r, B is m x s.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn_serial(const DenseMatrix& a, const DenseMatrix& b);

/// C = A * B.
DenseMatrix matmul_nn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nn_serial(const DenseMatrix& a, const DenseMatrix& b);

/// R = A - X * Y^T.
DenseMatrix residual(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& y);
DenseMatrix residual_serial(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& y);

/// Sum of squared entries. The parallel variant reduces per-thread partial
/// sums in thread order; it can differ from the serial sum by rounding.
double frobenius_sq(const DenseMatrix& m);
double frobenius_sq_serial(const DenseMatrix& m);

/// G = scale * (R * Y) with entries outside `mask` zeroed. R is m x n,
/// Y is n x r, mask is m x r.
DenseMatrix scaled_masked_product_nt(double scale, const DenseMatrix& r, const DenseMatrix& y,
                                     const SupportMask& mask);
DenseMatrix scaled_masked_product_nt_serial(double scale, const DenseMatrix& r,
                                            const DenseMatrix& y, const SupportMask& mask);

/// G = scale * (R^T * X) with entries outside `mask` zeroed. R is m x n,
/// X is m x r, mask is n x r.
DenseMatrix scaled_masked_product_tn(double scale, const DenseMatrix& r, const DenseMatrix& x,
                                     const SupportMask& mask);
DenseMatrix scaled_masked_product_tn_serial(double scale, const DenseMatrix& r,
                                            const DenseMatrix& x, const SupportMask& mask);

/// Zero every entry of `m` outside `mask`.
DenseMatrix apply_mask(const DenseMatrix& m, const SupportMask& mask);
DenseMatrix apply_mask_serial(const DenseMatrix& m, const SupportMask& mask);

}  // namespace fsmf::kernels
