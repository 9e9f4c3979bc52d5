#include "fsmf/landscape.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "fsmf/errors.hpp"

namespace fsmf {

double g_sigma(double sigma) {
    const double num = 2.0 * (sigma + 1.0) * (sigma + 1.0);
    const double s3 = sigma * sigma + 3.0;
    const double disc = s3 * s3 - 4.0 * (sigma + 1.0) * (sigma + 1.0);
    const double den = s3 + std::sqrt(std::max(disc, 0.0));
    assert(den > 0.0);
    return num / den;
}

double rank_one_loss_2x2(double a11, double a12, double a21, double a22) {
    // Squared singular values are the roots of z^2 - tr z + det, with
    // tr = ||M||_F^2 and det = det(M)^2.
    const double tr = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
    const double det = a11 * a22 - a12 * a21;
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det * det, 0.0));
    return (tr - disc) / 2.0;
}

double g_sigma_oracle(double sigma) { return rank_one_loss_2x2(1.0, 1.0, 1.0, -sigma); }

double sigma_coordinate(const FactorPair& factors, const SpuriousWitness& witness) {
    double s = 0.0;
    for (int p = 0; p < factors.X.cols(); ++p) {
        if (p == witness.k) continue;
        s += factors.X(witness.i2, p) * factors.Y(witness.j2, p);
    }
    return s;
}

namespace {

int pick_partner_column(int r, int k) {
    for (int l = 0; l < r; ++l)
        if (l != k) return l;
    throw PreconditionError("spurious construction needs at least two columns");
}

}  // namespace

SpuriousValleyInstance build_spurious_valley_instance(int m, int n, int r,
                                                      const SpuriousWitness& w) {
    if (w.i1 == w.i2 || w.j1 == w.j2 || w.i1 < 0 || w.i2 >= m || w.i1 >= m || w.i2 < 0 ||
        w.j1 < 0 || w.j1 >= n || w.j2 < 0 || w.j2 >= n || w.k < 0 || w.k >= r)
        throw PreconditionError("build_spurious_valley_instance: witness indices invalid");
    const int l = pick_partner_column(r, w.k);

    // Column k spans the 2x2 window; column l covers only (i2, j2), which
    // is then in two rank-one supports while the other three window cells
    // are in column k's support alone.
    SupportMask left(m, r, {{w.i1, w.k}, {w.i2, w.k}, {w.i2, l}});
    SupportMask right(n, r, {{w.j1, w.k}, {w.j2, w.k}, {w.j2, l}});

    DenseMatrix a(m, n);
    a(w.i1, w.j1) = 1.0;
    a(w.i1, w.j2) = 1.0;
    a(w.i2, w.j1) = 1.0;

    SpuriousValleyInstance out;
    out.instance = ProblemInstance(std::move(a), SupportPair(std::move(left), std::move(right)));
    out.witness = w;
    out.partner_column = l;

    // In-valley point: column k carries the dominant eigenpair of
    // [[1,1],[1,-5]] (eigenvalue -2 - sqrt(10)), column l fixes the slice
    // coordinate at 5. The loss is then the slice infimum g(5).
    {
        const double lambda = -2.0 - std::sqrt(10.0);
        double v1 = 1.0, v2 = lambda - 1.0;  // (1 - lambda) v1 + v2 = 0
        const double norm = std::sqrt(v1 * v1 + v2 * v2);
        v1 /= norm;
        v2 /= norm;
        FactorPair p{DenseMatrix(m, r), DenseMatrix(n, r)};
        p.X(w.i1, w.k) = v1;
        p.X(w.i2, w.k) = v2;
        p.Y(w.j1, w.k) = lambda * v1;
        p.Y(w.j2, w.k) = lambda * v2;
        p.X(w.i2, l) = 5.0;
        p.Y(w.j2, l) = 1.0;
        out.in_valley = std::move(p);
    }

    // Zero-loss optimum with slice coordinate -1.
    {
        FactorPair p{DenseMatrix(m, r), DenseMatrix(n, r)};
        p.X(w.i1, w.k) = 1.0;
        p.X(w.i2, w.k) = 1.0;
        p.X(w.i2, l) = 1.0;
        p.Y(w.j1, w.k) = 1.0;
        p.Y(w.j2, w.k) = 1.0;
        p.Y(w.j2, l) = -1.0;
        out.optimum = std::move(p);
    }
    return out;
}

SpuriousMinimumInstance build_spurious_minimum_instance(double a, double b) {
    if (!(a > b && b > 0.0))
        throw PreconditionError("build_spurious_minimum_instance: need a > b > 0");
    SupportMask tri(2, 2, {{0, 0}, {1, 0}, {1, 1}});
    SpuriousMinimumInstance out;
    out.instance =
        ProblemInstance(DenseMatrix{{b, 0.0}, {0.0, a}}, SupportPair(tri, tri));
    out.spurious_min.X = DenseMatrix{{0.0, 0.0}, {a, 0.0}};
    out.spurious_min.Y = DenseMatrix{{0.0, 0.0}, {1.0, 0.0}};
    out.optimum.X = DenseMatrix{{b, 0.0}, {0.0, a}};
    out.optimum.Y = DenseMatrix::identity(2);
    return out;
}

FeasiblePath smart_init_path(const ProblemInstance& instance, const FactorPair& opt,
                             const DenseMatrix& start_x, int sample_count) {
    const int n = instance.n(), r = instance.r();
    FeasiblePath path;
    path.sample_count = sample_count;
    path.sampler = [opt, start_x, n, r](double t) {
        FactorPair p;
        if (t <= 0.5) {
            const double w = 2.0 * t;
            p.X = start_x;
            p.X *= (1.0 - w);
            DenseMatrix target = opt.X;
            target *= w;
            p.X += target;
            p.Y = DenseMatrix(n, r);
        } else {
            p.X = opt.X;
            p.Y = opt.Y;
            p.Y *= (2.0 * t - 1.0);
        }
        return p;
    };
    return path;
}

PathCheck check_path(const FeasiblePath& path, const ProblemInstance& instance) {
    PathCheck check;
    const int samples = std::max(path.sample_count, 2);
    double previous = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double t = static_cast<double>(s) / (samples - 1);
        FactorPair p = path.sampler(t);
        if (check.feasible && !p.respects(instance.supports)) {
            check.feasible = false;
            check.first_infeasible_t = t;
        }
        const double value = loss(instance, p);
        if (s > 0) {
            const double rise = value - previous;
            if (rise > check.max_violation) check.max_violation = rise;
        }
        previous = value;
    }
    check.monotone = check.max_violation <= 1e-10;
    return check;
}

}  // namespace fsmf
