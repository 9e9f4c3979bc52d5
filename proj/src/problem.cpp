#include "fsmf/problem.hpp"

#include <stdexcept>

#include "fsmf/kernels.hpp"

namespace fsmf {

DenseMatrix FactorPair::product() const { return kernels::matmul_nt(X, Y); }

bool FactorPair::respects(const SupportPair& supports) const {
    if (X.rows() != supports.left.rows() || X.cols() != supports.left.cols()) return false;
    if (Y.rows() != supports.right.rows() || Y.cols() != supports.right.cols()) return false;
    for (int j = 0; j < X.cols(); ++j)
        for (int i = 0; i < X.rows(); ++i)
            if (X(i, j) != 0.0 && !supports.left.contains(i, j)) return false;
    for (int j = 0; j < Y.cols(); ++j)
        for (int i = 0; i < Y.rows(); ++i)
            if (Y(i, j) != 0.0 && !supports.right.contains(i, j)) return false;
    return true;
}

ProblemInstance::ProblemInstance(DenseMatrix a, SupportPair s)
    : target(std::move(a)), supports(std::move(s)) {
    if (supports.left.rows() != target.rows() || supports.right.rows() != target.cols())
        throw std::invalid_argument("ProblemInstance: supports do not match target dimensions");
    if (!target.all_finite())
        throw std::invalid_argument("ProblemInstance: target has non-finite entries");
}

namespace {

void check_dims(const ProblemInstance& instance, const FactorPair& factors) {
    if (factors.X.rows() != instance.m() || factors.Y.rows() != instance.n() ||
        factors.X.cols() != factors.Y.cols() || factors.X.cols() != instance.r())
        throw std::invalid_argument("factor dimensions incoherent with instance");
}

}  // namespace

double loss(const ProblemInstance& instance, const FactorPair& factors) {
    check_dims(instance, factors);
    return kernels::frobenius_sq(kernels::residual(instance.target, factors.X, factors.Y));
}

std::pair<DenseMatrix, DenseMatrix> masked_gradient(const ProblemInstance& instance,
                                                    const FactorPair& factors) {
    check_dims(instance, factors);
    DenseMatrix res = kernels::residual(instance.target, factors.X, factors.Y);
    DenseMatrix gx = kernels::scaled_masked_product_nt(-2.0, res, factors.Y, instance.supports.left);
    DenseMatrix gy = kernels::scaled_masked_product_tn(-2.0, res, factors.X, instance.supports.right);
    return {std::move(gx), std::move(gy)};
}

DenseMatrix project_to_support(const DenseMatrix& m, const SupportMask& mask) {
    return kernels::apply_mask(m, mask);
}

}  // namespace fsmf
