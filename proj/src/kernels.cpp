#include "fsmf/kernels.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fsmf/parallel.hpp"

namespace fsmf::kernels {

namespace {

bool use_parallel(long cells) {
#ifdef _OPENMP
    return cells >= parallel::kSerialCutoff && parallel::max_threads() > 1;
#else
    (void)cells;
    return false;
#endif
}

inline double dot_rows(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int t = 0; t < n; ++t) s += a[t] * b[t];
    return s;
}

}  // namespace

DenseMatrix matmul_nt_serial(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: inner dimension mismatch");
    const int m = a.rows(), n = b.rows(), r = a.cols();
    DenseMatrix c(m, n);
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    double* cd = c.data().data();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            cd[static_cast<std::size_t>(i) * n + j] = dot_rows(ad + static_cast<std::size_t>(i) * r,
                                                              bd + static_cast<std::size_t>(j) * r, r);
    return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: inner dimension mismatch");
    const int m = a.rows(), n = b.rows(), r = a.cols();
    if (!use_parallel(static_cast<long>(m) * n)) return matmul_nt_serial(a, b);
    DenseMatrix c(m, n);
    const double* ad = a.data().data();
    const double* bd = b.data().data();
    double* cd = c.data().data();
#pragma omp parallel for schedule(static) num_threads(parallel::max_threads())
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            cd[static_cast<std::size_t>(i) * n + j] = dot_rows(ad + static_cast<std::size_t>(i) * r,
                                                              bd + static_cast<std::size_t>(j) * r, r);
    return c;
}

DenseMatrix matmul_tn_serial(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: inner dimension mismatch");
    const int r = a.cols(), s = b.cols(), m = a.rows();
    DenseMatrix c(r, s);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j) {
            double acc = 0.0;
            for (int t = 0; t < m; ++t) acc += a(t, i) * b(t, j);
            c(i, j) = acc;
        }
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: inner dimension mismatch");
    const int r = a.cols(), s = b.cols(), m = a.rows();
    if (!use_parallel(static_cast<long>(r) * s)) return matmul_tn_serial(a, b);
    DenseMatrix c(r, s);
#pragma omp parallel for schedule(static) num_threads(parallel::max_threads())
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j) {
            double acc = 0.0;
            for (int t = 0; t < m; ++t) acc += a(t, i) * b(t, j);
            c(i, j) = acc;
        }
    return c;
}

DenseMatrix matmul_nn_serial(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul_nn: inner dimension mismatch");
    const int m = a.rows(), n = b.cols(), r = a.cols();
    DenseMatrix c(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int t = 0; t < r; ++t) acc += a(i, t) * b(t, j);
            c(i, j) = acc;
        }
    return c;
}

DenseMatrix matmul_nn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul_nn: inner dimension mismatch");
    const int m = a.rows(), n = b.cols(), r = a.cols();
    if (!use_parallel(static_cast<long>(m) * n)) return matmul_nn_serial(a, b);
    DenseMatrix c(m, n);
#pragma omp parallel for schedule(static) num_threads(parallel::max_threads())
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int t = 0; t < r; ++t) acc += a(i, t) * b(t, j);
            c(i, j) = acc;
        }
    return c;
}

DenseMatrix residual_serial(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& y) {
    if (x.cols() != y.cols() || a.rows() != x.rows() || a.cols() != y.rows())
        throw std::invalid_argument("residual: dimension mismatch");
    const int m = a.rows(), n = a.cols(), r = x.cols();
    DenseMatrix out(m, n);
    const double* xd = x.data().data();
    const double* yd = y.data().data();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = a(i, j) - dot_rows(xd + static_cast<std::size_t>(i) * r,
                                           yd + static_cast<std::size_t>(j) * r, r);
    return out;
}

DenseMatrix residual(const DenseMatrix& a, const DenseMatrix& x, const DenseMatrix& y) {
    if (x.cols() != y.cols() || a.rows() != x.rows() || a.cols() != y.rows())
        throw std::invalid_argument("residual: dimension mismatch");
    const int m = a.rows(), n = a.cols(), r = x.cols();
    if (!use_parallel(static_cast<long>(m) * n)) return residual_serial(a, x, y);
    DenseMatrix out(m, n);
    const double* xd = x.data().data();
    const double* yd = y.data().data();
#pragma omp parallel for schedule(static) num_threads(parallel::max_threads())
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = a(i, j) - dot_rows(xd + static_cast<std::size_t>(i) * r,
                                           yd + static_cast<std::size_t>(j) * r, r);
    return out;
}

double frobenius_sq_serial(const DenseMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return s;
}

double frobenius_sq(const DenseMatrix& m) {
#ifdef _OPENMP
    const long n = static_cast<long>(m.size());
    if (use_parallel(n)) {
        const int nt = parallel::max_threads();
        std::vector<double> partial(static_cast<std::size_t>(nt), 0.0);
        const double* d = m.data().data();
#pragma omp parallel num_threads(nt)
        {
            const int tid = omp_get_thread_num();
            double local = 0.0;
#pragma omp for schedule(static)
            for (long i = 0; i < n; ++i) local += d[i] * d[i];
            partial[static_cast<std::size_t>(tid)] = local;
        }
        double s = 0.0;
        for (double p : partial) s += p;  // fixed combination order
        return s;
    }
#endif
    return frobenius_sq_serial(m);
}

DenseMatrix scaled_masked_product_nt_serial(double scale, const DenseMatrix& r,
                                            const DenseMatrix& y, const SupportMask& mask) {
    if (r.cols() != y.rows() || mask.rows() != r.rows() || mask.cols() != y.cols())
        throw std::invalid_argument("scaled_masked_product_nt: dimension mismatch");
    DenseMatrix g(mask.rows(), mask.cols());
    const int n = r.cols();
    for (int c = 0; c < mask.cols(); ++c)
        for (int i : mask.column_rows(c)) {
            double acc = 0.0;
            for (int t = 0; t < n; ++t) acc += r(i, t) * y(t, c);
            g(i, c) = scale * acc;
        }
    return g;
}

DenseMatrix scaled_masked_product_nt(double scale, const DenseMatrix& r, const DenseMatrix& y,
                                     const SupportMask& mask) {
    if (r.cols() != y.rows() || mask.rows() != r.rows() || mask.cols() != y.cols())
        throw std::invalid_argument("scaled_masked_product_nt: dimension mismatch");
    if (!use_parallel(static_cast<long>(mask.nnz()) ))
        return scaled_masked_product_nt_serial(scale, r, y, mask);
    DenseMatrix g(mask.rows(), mask.cols());
    const int n = r.cols();
    const int cols = mask.cols();
#pragma omp parallel for schedule(static) num_threads(parallel::max_threads())
    for (int c = 0; c < cols; ++c)
        for (int i : mask.column_rows(c)) {
            double acc = 0.0;
            for (int t = 0; t < n; ++t) acc += r(i, t) * y(t, c);
            g(i, c) = scale * acc;
        }
    return g;
}

DenseMatrix scaled_masked_product_tn_serial(double scale, const DenseMatrix& r,
                                            const DenseMatrix& x, const SupportMask& mask) {
    if (r.rows() != x.rows() || mask.rows() != r.cols() || mask.cols() != x.cols())
        throw std::invalid_argument("scaled_masked_product_tn: dimension mismatch");
    DenseMatrix g(mask.rows(), mask.cols());
    const int m = r.rows();
    for (int c = 0; c < mask.cols(); ++c)
        for (int j : mask.column_rows(c)) {
            double acc = 0.0;
            for (int t = 0; t < m; ++t) acc += r(t, j) * x(t, c);
            g(j, c) = scale * acc;
        }
    return g;
}

DenseMatrix scaled_masked_product_tn(double scale, const DenseMatrix& r, const DenseMatrix& x,
                                     const SupportMask& mask) {
    if (r.rows() != x.rows() || mask.rows() != r.cols() || mask.cols() != x.cols())
        throw std::invalid_argument("scaled_masked_product_tn: dimension mismatch");
    if (!use_parallel(static_cast<long>(mask.nnz())))
        return scaled_masked_product_tn_serial(scale, r, x, mask);
    DenseMatrix g(mask.rows(), mask.cols());
    const int m = r.rows();
    const int cols = mask.cols();
#pragma omp parallel for schedule(static) num_threads(parallel::max_threads())
    for (int c = 0; c < cols; ++c)
        for (int j : mask.column_rows(c)) {
            double acc = 0.0;
            for (int t = 0; t < m; ++t) acc += r(t, j) * x(t, c);
            g(j, c) = scale * acc;
        }
    return g;
}

DenseMatrix apply_mask_serial(const DenseMatrix& m, const SupportMask& mask) {
    if (m.rows() != mask.rows() || m.cols() != mask.cols())
        throw std::invalid_argument("apply_mask: shape mismatch");
    DenseMatrix out(m.rows(), m.cols());
    for (int c = 0; c < mask.cols(); ++c)
        for (int i : mask.column_rows(c)) out(i, c) = m(i, c);
    return out;
}

DenseMatrix apply_mask(const DenseMatrix& m, const SupportMask& mask) {
    if (m.rows() != mask.rows() || m.cols() != mask.cols())
        throw std::invalid_argument("apply_mask: shape mismatch");
    if (!use_parallel(static_cast<long>(mask.nnz()))) return apply_mask_serial(m, mask);
    DenseMatrix out(m.rows(), m.cols());
    const int cols = mask.cols();
#pragma omp parallel for schedule(static) num_threads(parallel::max_threads())
    for (int c = 0; c < cols; ++c)
        for (int i : mask.column_rows(c)) out(i, c) = m(i, c);
    return out;
}

}  // namespace fsmf::kernels
