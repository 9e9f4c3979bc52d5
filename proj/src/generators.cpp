#include "fsmf/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fsmf/errors.hpp"
#include "fsmf/kernels.hpp"

namespace fsmf {

McpInstance::McpInstance(DenseMatrix a, SupportMask w) : A(std::move(a)), W(std::move(w)) {
    if (A.rows() != W.rows() || A.cols() != W.cols())
        throw std::invalid_argument("McpInstance: mask and target shapes differ");
}

double McpInstance::objective(const std::vector<double>& x, const std::vector<double>& y) const {
    if (static_cast<int>(x.size()) != A.rows() || static_cast<int>(y.size()) != A.cols())
        throw std::invalid_argument("McpInstance::objective: vector sizes");
    double s = 0.0;
    for (const auto& [i, j] : W.cells()) {
        const double d = A(i, j) - x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
        s += d * d;
    }
    return s;
}

McpReduction mcp_to_fsmf(const SupportMask& w) {
    McpReduction red;
    red.transposed = w.rows() < w.cols();
    const int m = red.transposed ? w.cols() : w.rows();
    const int n = red.transposed ? w.rows() : w.cols();
    auto observed = [&](int i, int j) { return red.transposed ? w.contains(j, i) : w.contains(i, j); };

    std::vector<Cell> left, right;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i)
            if (!observed(i, j)) left.emplace_back(i, j);  // 1 - W on the first n columns
    for (int i = 0; i < m; ++i) left.emplace_back(i, n);   // last column full
    for (int j = 0; j < n; ++j) {
        right.emplace_back(j, j);
        right.emplace_back(j, n);
    }
    red.supports = SupportPair(SupportMask(m, n + 1, std::move(left)),
                               SupportMask(n, n + 1, std::move(right)));
    return red;
}

ProblemInstance McpReduction::instance(const DenseMatrix& a) const {
    return ProblemInstance(transposed ? a.transposed() : a, supports);
}

FactorPair map_mcp_solution_to_fsmf(const McpReduction& reduction, const DenseMatrix& a,
                                    const std::vector<double>& x, const std::vector<double>& y) {
    const DenseMatrix target = reduction.transposed ? a.transposed() : a;
    const std::vector<double>& xv = reduction.transposed ? y : x;
    const std::vector<double>& yv = reduction.transposed ? x : y;
    const int m = target.rows(), n = target.cols();
    if (static_cast<int>(xv.size()) != m || static_cast<int>(yv.size()) != n)
        throw std::invalid_argument("map_mcp_solution_to_fsmf: vector sizes");

    FactorPair factors{DenseMatrix(m, n + 1), DenseMatrix(n, n + 1)};
    for (int i = 0; i < m; ++i) factors.X(i, n) = xv[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) factors.Y(j, n) = yv[static_cast<std::size_t>(j)];
    for (int j = 0; j < n; ++j) {
        factors.Y(j, j) = 1.0;
        for (int i : reduction.supports.left.column_rows(j))
            factors.X(i, j) = target(i, j) - xv[static_cast<std::size_t>(i)] * yv[static_cast<std::size_t>(j)];
    }
    return factors;
}

std::pair<std::vector<double>, std::vector<double>> map_fsmf_solution_to_mcp(
    const McpReduction& reduction, const FactorPair& factors) {
    const int m = factors.X.rows(), n = factors.Y.rows();
    const int last = factors.X.cols() - 1;
    std::vector<double> x(static_cast<std::size_t>(m)), y(static_cast<std::size_t>(n));
    for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = factors.X(i, last);
    for (int j = 0; j < n; ++j) y[static_cast<std::size_t>(j)] = factors.Y(j, last);
    if (reduction.transposed) return {std::move(y), std::move(x)};
    return {std::move(x), std::move(y)};
}

SupportPair gen_full(int m, int n, int r) {
    return SupportPair(SupportMask::full(m, r), SupportMask::full(n, r));
}

SupportPair gen_lu(int n) {
    std::vector<Cell> cells;
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) cells.emplace_back(i, j);
    SupportMask tri(n, n, cells);
    return SupportPair(tri, tri);
}

namespace {

// Kronecker product of two binary masks given as (rows, cols, predicate).
SupportMask kron_mask(int p, int q, bool left_ones, int s, int t, bool right_ones) {
    // left factor: ones(p x q) or id(p x q); right factor: ones/id(s x t).
    std::vector<Cell> cells;
    for (int bi = 0; bi < p; ++bi)
        for (int bj = 0; bj < q; ++bj) {
            if (!left_ones && bi != bj) continue;
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < t; ++j) {
                    if (!right_ones && i != j) continue;
                    cells.emplace_back(bi * s + i, bj * t + j);
                }
        }
    return SupportMask(p * s, q * t, std::move(cells));
}

int pow2(int e) { return 1 << e; }

}  // namespace

SupportPair gen_kron1(int n_log2) {
    if (n_log2 < 1) throw std::invalid_argument("gen_kron1: N must be >= 1");
    const int a = (n_log2 + 1) / 2;
    const int b = n_log2 / 2;
    SupportMask left = kron_mask(pow2(a), pow2(a), true, pow2(b), pow2(b), false);
    SupportMask right = kron_mask(pow2(a), pow2(a), false, pow2(b), pow2(b), true);
    return SupportPair(std::move(left), std::move(right));
}

SupportPair gen_kron2(int n_log2) {
    if (n_log2 < 1) throw std::invalid_argument("gen_kron2: N must be >= 1");
    const int half = pow2(n_log2 - 1);
    SupportMask left = kron_mask(2, 2, true, half, half, false);
    SupportMask right = kron_mask(2, 2, false, half, half, true);
    return SupportPair(std::move(left), std::move(right));
}

SupportPair gen_hodlr(int n_log2) {
    if (n_log2 < 1) throw std::invalid_argument("gen_hodlr: N must be >= 1");
    if (n_log2 == 1) {
        SupportMask left(2, 4, {{0, 0}, {1, 1}, {0, 2}, {1, 3}});
        SupportMask right(2, 4, {{1, 0}, {0, 1}, {0, 2}, {1, 3}});
        return SupportPair(std::move(left), std::move(right));
    }
    SupportPair inner = gen_hodlr(n_log2 - 1);
    const int half = pow2(n_log2 - 1);
    const int inner_cols = inner.inner_dim();  // 3 * 2^(N-1) - 2
    const int cols = 2 * inner_cols + 2;
    std::vector<Cell> left, right;
    for (int i = 0; i < half; ++i) {
        left.emplace_back(i, 0);          // upper-right block's column vector
        left.emplace_back(half + i, 1);   // lower-left block's column vector
        right.emplace_back(half + i, 0);
        right.emplace_back(i, 1);
    }
    for (const auto& [i, j] : inner.left.cells()) {
        left.emplace_back(i, 2 + j);
        left.emplace_back(half + i, 2 + inner_cols + j);
    }
    for (const auto& [i, j] : inner.right.cells()) {
        right.emplace_back(i, 2 + j);
        right.emplace_back(half + i, 2 + inner_cols + j);
    }
    return SupportPair(SupportMask(2 * half, cols, std::move(left)),
                       SupportMask(2 * half, cols, std::move(right)));
}

DenseMatrix gen_hadamard(int n_log2) {
    if (n_log2 < 0) throw std::invalid_argument("gen_hadamard: N must be >= 0");
    DenseMatrix h(1, 1, 1.0);
    for (int level = 0; level < n_log2; ++level) {
        const int n = h.rows();
        DenseMatrix next(2 * n, 2 * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double v = h(i, j);
                next(i, j) = v;
                next(i, n + j) = v;
                next(n + i, j) = v;
                next(n + i, n + j) = -v;
            }
        h = std::move(next);
    }
    return h;
}

namespace {

void fill_hodlr(DenseMatrix& a, int row0, int col0, int size, std::mt19937_64& rng) {
    std::normal_distribution<double> unit(0.0, 1.0);
    if (size == 1) {
        a(row0, col0) = unit(rng);
        return;
    }
    const int half = size / 2;
    std::vector<double> u(static_cast<std::size_t>(half)), v(static_cast<std::size_t>(half));
    for (auto& t : u) t = unit(rng);
    for (auto& t : v) t = unit(rng);
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < half; ++j) a(row0 + i, col0 + half + j) = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    for (auto& t : u) t = unit(rng);
    for (auto& t : v) t = unit(rng);
    for (int i = 0; i < half; ++i)
        for (int j = 0; j < half; ++j) a(row0 + half + i, col0 + j) = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    fill_hodlr(a, row0, col0, half, rng);
    fill_hodlr(a, row0 + half, col0 + half, half, rng);
}

}  // namespace

DenseMatrix gen_random_hodlr_matrix(int n_log2, std::uint64_t seed) {
    if (n_log2 < 1) throw std::invalid_argument("gen_random_hodlr_matrix: N must be >= 1");
    const int n = pow2(n_log2);
    DenseMatrix a(n, n);
    std::mt19937_64 rng(seed);
    fill_hodlr(a, 0, 0, n, rng);
    return a;
}

UnattainedLuInstance gen_unattained_lu_instance() {
    UnattainedLuInstance out;
    SupportMask mask(2, 2, {{0, 0}, {0, 1}, {1, 1}});
    out.instance = ProblemInstance(DenseMatrix{{0.0, 1.0}, {1.0, 0.0}}, SupportPair(mask, mask));
    return out;
}

FactorPair UnattainedLuInstance::witness(double k) const {
    if (k <= 0.0) throw PreconditionError("witness parameter must be positive");
    // X Y^T hits the off-diagonal ones exactly and leaves 1/k at the
    // lower-right corner, so the loss is 1/k^2 while the largest
    // coefficient is k.
    FactorPair w;
    w.X = DenseMatrix{{-k, 1.0}, {0.0, 1.0 / k}};
    w.Y = DenseMatrix{{1.0, k}, {0.0, 1.0}};
    return w;
}

}  // namespace fsmf
