#include "fsmf/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fsmf/kernels.hpp"

namespace fsmf {

namespace {

constexpr int kMaxSweeps = 64;
constexpr double kOrthoTol = 1e-15;

// One-sided Jacobi on the columns of B (rows >= cols expected): rotates
// column pairs until they are mutually orthogonal, accumulating the
// rotations in V. Afterwards B = U * diag(s) with s_i = ||B_i||.
void one_sided_jacobi(DenseMatrix& b, DenseMatrix& v) {
    const int rows = b.rows(), cols = b.cols();
    // Rotations preserve the total energy; columns below this are treated
    // as numerically zero instead of being ground against rounding noise.
    const double negligible = 1e-30 * b.frobenius_sq();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < rows; ++i) {
                    const double bp = b(i, p), bq = b(i, q);
                    app += bp * bp;
                    aqq += bq * bq;
                    apq += bp * bq;
                }
                if (app <= negligible || aqq <= negligible) continue;
                if (std::abs(apq) <= kOrthoTol * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < rows; ++i) {
                    const double bp = b(i, p), bq = b(i, q);
                    b(i, p) = c * bp - s * bq;
                    b(i, q) = s * bp + c * bq;
                }
                for (int i = 0; i < cols; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) return;
    }
}

void fix_sign(DenseMatrix& u, DenseMatrix& v, int col) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < u.rows(); ++i) {
        const double a = std::abs(u(i, col));
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (u(arg, col) < 0.0) {
        for (int i = 0; i < u.rows(); ++i) u(i, col) = -u(i, col);
        for (int i = 0; i < v.rows(); ++i) v(i, col) = -v(i, col);
    }
}

}  // namespace

SvdResult jacobi_svd(const DenseMatrix& a) {
    const bool transposed = a.rows() < a.cols();
    DenseMatrix b = transposed ? a.transposed() : a;
    const int rows = b.rows(), cols = b.cols();

    DenseMatrix v = DenseMatrix::identity(cols);
    one_sided_jacobi(b, v);

    std::vector<double> norms(cols);
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += b(i, j) * b(i, j);
        norms[j] = std::sqrt(s);
    }
    std::vector<int> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return norms[i] > norms[j]; });

    DenseMatrix u_out(rows, cols), v_out(cols, cols);
    std::vector<double> sigma(cols);
    for (int k = 0; k < cols; ++k) {
        const int j = order[k];
        sigma[k] = norms[j];
        if (norms[j] > 0.0) {
            for (int i = 0; i < rows; ++i) u_out(i, k) = b(i, j) / norms[j];
        }
        for (int i = 0; i < cols; ++i) v_out(i, k) = v(i, j);
    }

    SvdResult result;
    if (transposed) {
        result.U = std::move(v_out);
        result.V = std::move(u_out);
    } else {
        result.U = std::move(u_out);
        result.V = std::move(v_out);
    }
    for (int k = 0; k < cols; ++k) fix_sign(result.U, result.V, k);
    result.singular_values = std::move(sigma);
    return result;
}

namespace {

// Largest eigenvalue of a symmetric matrix: Householder tridiagonalization
// followed by Sturm bisection. Destroys its argument.
double largest_symmetric_eigenvalue(DenseMatrix g) {
    const int n = g.rows();
    std::vector<double> diag(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(g(i, k));
        if (scale == 0.0) continue;
        double h = 0.0;
        std::vector<double> u(static_cast<std::size_t>(n), 0.0);
        for (int i = k + 1; i < n; ++i) {
            u[static_cast<std::size_t>(i)] = g(i, k) / scale;
            h += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        }
        double f = u[static_cast<std::size_t>(k + 1)];
        double alpha = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
        h -= f * alpha;
        u[static_cast<std::size_t>(k + 1)] = f - alpha;
        if (h == 0.0) continue;
        // p = G u / h, K = u^T p / (2h), q = p - K u; G <- G - q u^T - u q^T
        std::vector<double> p(static_cast<std::size_t>(n), 0.0);
        for (int i = k + 1; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += g(i, j) * u[static_cast<std::size_t>(j)];
            p[static_cast<std::size_t>(i)] = s / h;
        }
        double kappa = 0.0;
        for (int i = k + 1; i < n; ++i) kappa += u[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
        kappa /= 2.0 * h;
        for (int i = k + 1; i < n; ++i)
            p[static_cast<std::size_t>(i)] -= kappa * u[static_cast<std::size_t>(i)];
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                g(i, j) -= p[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)] +
                           u[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(j)];
        g(k + 1, k) = scale * alpha;
        for (int i = k + 2; i < n; ++i) g(i, k) = 0.0;
    }
    for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = g(i, i);
    for (int i = 1; i < n; ++i) off[static_cast<std::size_t>(i)] = g(i, i - 1);

    // Sturm count: eigenvalues of the tridiagonal matrix strictly below x.
    auto count_below = [&](double x) {
        int count = 0;
        double d = 1.0;
        for (int i = 0; i < n; ++i) {
            const double e = off[static_cast<std::size_t>(i)];
            d = diag[static_cast<std::size_t>(i)] - x - (i > 0 ? e * e / d : 0.0);
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++count;
        }
        return count;
    };
    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < n; ++i) {
        const double radius = std::abs(off[static_cast<std::size_t>(i)]) +
                              (i + 1 < n ? std::abs(off[static_cast<std::size_t>(i + 1)]) : 0.0);
        lo = std::min(lo, diag[static_cast<std::size_t>(i)] - radius);
        hi = std::max(hi, diag[static_cast<std::size_t>(i)] + radius);
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) < n)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double operator_norm(const DenseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const bool use_cols = a.cols() <= a.rows();
    const DenseMatrix gram = use_cols ? kernels::matmul_tn(a, a)
                                      : kernels::matmul_nt(a, a);
    if (gram.rows() == 1) return std::sqrt(std::max(gram(0, 0), 0.0));
    return std::sqrt(std::max(largest_symmetric_eigenvalue(gram), 0.0));
}

DenseMatrix TruncatedSVDResult::approximant() const { return kernels::matmul_nt(U, V); }

double TruncatedSVDResult::tail_energy(int k) const {
    double s = 0.0;
    for (std::size_t i = static_cast<std::size_t>(k); i < singular_values.size(); ++i)
        s += singular_values[i] * singular_values[i];
    return s;
}

TruncatedSVDResult truncated_svd(const DenseMatrix& a, int k) {
    const int q = std::min(a.rows(), a.cols());
    if (k < 0 || k > q) throw std::invalid_argument("truncated_svd: rank out of range");
    SvdResult svd = jacobi_svd(a);
    TruncatedSVDResult out;
    out.U = DenseMatrix(a.rows(), k);
    out.V = DenseMatrix(a.cols(), k);
    for (int j = 0; j < k; ++j) {
        const double w = std::sqrt(svd.singular_values[j]);
        for (int i = 0; i < a.rows(); ++i) out.U(i, j) = svd.U(i, j) * w;
        for (int i = 0; i < a.cols(); ++i) out.V(i, j) = svd.V(i, j) * w;
    }
    out.singular_values = std::move(svd.singular_values);
    return out;
}

}  // namespace fsmf
