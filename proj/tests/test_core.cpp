#include <doctest.h>

#include <random>

#include "fsmf/generators.hpp"
#include "fsmf/problem.hpp"
#include "test_helpers.hpp"

using namespace fsmf;
using test::random_matrix;
using test::random_mask;

TEST_CASE("loss: zero target and zero factors") {
    ProblemInstance instance(DenseMatrix(2, 2), gen_full(2, 2, 2));
    FactorPair zero{DenseMatrix(2, 2), DenseMatrix(2, 2)};
    CHECK(loss(instance, zero) == 0.0);
}

TEST_CASE("loss: exact identity factorization") {
    ProblemInstance instance(DenseMatrix::identity(2), gen_full(2, 2, 2));
    FactorPair factors{DenseMatrix::identity(2), DenseMatrix::identity(2)};
    CHECK(loss(instance, factors) == 0.0);
}

TEST_CASE("loss: rank-one residual expanded by hand") {
    ProblemInstance instance(DenseMatrix{{1, 2}, {3, 4}}, gen_full(2, 2, 1));
    FactorPair factors{DenseMatrix{{1}, {0}}, DenseMatrix{{1}, {0}}};
    CHECK(loss(instance, factors) == doctest::Approx(29.0).epsilon(1e-15));
}

TEST_CASE("loss: dimension mismatch throws") {
    ProblemInstance instance(DenseMatrix{{1, 2}, {3, 4}}, gen_full(2, 2, 1));
    FactorPair bad{DenseMatrix(3, 1), DenseMatrix(2, 1)};
    CHECK_THROWS_AS(loss(instance, bad), std::invalid_argument);
}

TEST_CASE("loss is zero iff the product matches the target") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 4);
        const int n = 2 + static_cast<int>(rng() % 4);
        const int r = 1 + static_cast<int>(rng() % 3);
        FactorPair factors{random_matrix(m, r, rng), random_matrix(n, r, rng)};
        ProblemInstance exact(factors.product(), gen_full(m, n, r));
        CHECK(loss(exact, factors) <= 1e-12 * exact.target.frobenius());

        DenseMatrix off = exact.target;
        off(0, 0) += 1.0;
        ProblemInstance shifted(off, gen_full(m, n, r));
        CHECK(loss(shifted, factors) > 1e-12 * off.frobenius());
    }
}

TEST_CASE("masked_gradient: vanishes at the origin") {
    std::mt19937_64 rng(5);
    ProblemInstance instance(random_matrix(3, 4, rng), gen_full(3, 4, 2));
    FactorPair zero{DenseMatrix(3, 2), DenseMatrix(4, 2)};
    auto [gx, gy] = masked_gradient(instance, zero);
    CHECK(gx.frobenius_sq() == 0.0);
    CHECK(gy.frobenius_sq() == 0.0);
}

TEST_CASE("masked_gradient: the documented critical point is exactly critical") {
    // I = [[1,1],[0,1]], J full, A = diag(10, 1); X0, Y0 supported on the
    // second column only.
    SupportMask left(2, 2, {{0, 0}, {0, 1}, {1, 1}});
    SupportMask right = SupportMask::full(2, 2);
    ProblemInstance instance(DenseMatrix{{10, 0}, {0, 1}}, SupportPair(left, right));
    FactorPair point{DenseMatrix{{0, 1}, {0, 0}}, DenseMatrix{{0, 10}, {0, 0}}};
    auto [gx, gy] = masked_gradient(instance, point);
    CHECK(gx.frobenius_sq() == 0.0);
    CHECK(gy.frobenius_sq() == 0.0);
}

TEST_CASE("masked_gradient matches central finite differences") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 4);
        const int n = 2 + static_cast<int>(rng() % 4);
        const int r = 1 + static_cast<int>(rng() % 4);
        SupportPair supports(random_mask(m, r, 0.7, rng), random_mask(n, r, 0.7, rng));
        ProblemInstance instance(random_matrix(m, n, rng), supports);
        FactorPair factors{project_to_support(random_matrix(m, r, rng), supports.left),
                           project_to_support(random_matrix(n, r, rng), supports.right)};
        auto [gx, gy] = masked_gradient(instance, factors);
        auto [fx, fy] = test::fd_gradient(instance, factors, 1e-6);
        const double scale = std::sqrt(gx.frobenius_sq() + gy.frobenius_sq());
        const double err = std::sqrt((gx - fx).frobenius_sq() + (gy - fy).frobenius_sq());
        if (scale > 1e-6) {
            CHECK(err <= 1e-4 * scale);
            ++checked;
        }
    }
    CHECK(checked >= 90);
}

TEST_CASE("project_to_support: full, empty, and the picked diagonal") {
    DenseMatrix m{{1, 2}, {3, 4}};
    CHECK(project_to_support(m, SupportMask::full(2, 2)) == m);
    CHECK(project_to_support(m, SupportMask(2, 2)).frobenius_sq() == 0.0);
    DenseMatrix picked = project_to_support(m, SupportMask(2, 2, {{0, 0}, {1, 1}}));
    CHECK(picked == DenseMatrix{{1, 0}, {0, 4}});
}

TEST_CASE("project_to_support is idempotent and linear") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        SupportMask mask = random_mask(4, 5, 0.5, rng);
        DenseMatrix a = random_matrix(4, 5, rng);
        DenseMatrix b = random_matrix(4, 5, rng);
        DenseMatrix pa = project_to_support(a, mask);
        CHECK(project_to_support(pa, mask) == pa);
        DenseMatrix combined = project_to_support(a + b * 3.0, mask);
        DenseMatrix separate = pa + project_to_support(b, mask) * 3.0;
        CHECK((combined - separate).max_abs() <= 1e-15);
    }
}

TEST_CASE("loss is invariant under column rescaling X D, Y D^-1") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 3, n = 4, r = 3;
        SupportPair supports(random_mask(m, r, 0.6, rng), random_mask(n, r, 0.6, rng));
        ProblemInstance instance(random_matrix(m, n, rng), supports);
        FactorPair factors{project_to_support(random_matrix(m, r, rng), supports.left),
                           project_to_support(random_matrix(n, r, rng), supports.right)};
        FactorPair scaled = factors;
        std::uniform_real_distribution<double> nonzero(0.5, 2.0);
        for (int k = 0; k < r; ++k) {
            const double d = nonzero(rng);
            for (int i = 0; i < m; ++i) scaled.X(i, k) *= d;
            for (int i = 0; i < n; ++i) scaled.Y(i, k) /= d;
        }
        CHECK(loss(instance, scaled) ==
              doctest::Approx(loss(instance, factors)).epsilon(1e-12));
    }
}

TEST_CASE("SupportMask: bounds, dedupe, column access") {
    CHECK_THROWS_AS(SupportMask(2, 2, {{2, 0}}), std::invalid_argument);
    SupportMask mask(3, 2, {{1, 0}, {1, 0}, {0, 1}, {2, 1}});
    CHECK(mask.nnz() == 3);
    CHECK(mask.column_rows(0) == std::vector<int>{1});
    CHECK(mask.column_rows(1) == std::vector<int>{0, 2});
    CHECK(mask.contains(2, 1));
    CHECK(!mask.contains(0, 0));
}

TEST_CASE("SupportPair rejects mismatched inner dimensions") {
    CHECK_THROWS_AS(SupportPair(SupportMask(2, 2), SupportMask(2, 3)), std::invalid_argument);
}
