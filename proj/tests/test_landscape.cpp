#include <doctest.h>

#include <cmath>
#include <random>

#include "fsmf/direct_solver.hpp"
#include "fsmf/errors.hpp"
#include "fsmf/generators.hpp"
#include "fsmf/iterative_solver.hpp"
#include "fsmf/landscape.hpp"
#include "test_helpers.hpp"

using namespace fsmf;
using test::random_mask;
using test::random_matrix;

TEST_CASE("g_sigma: spot values and ordering") {
    CHECK(g_sigma(-1.0) == 0.0);
    CHECK(g_sigma(1.0) == 2.0);
    CHECK(g_sigma(5.0) == doctest::Approx(72.0 / (28.0 + std::sqrt(640.0))).epsilon(1e-14));
    CHECK(g_sigma(1.0) > g_sigma(5.0));
    CHECK(g_sigma(5.0) > g_sigma(-1.0));
}

TEST_CASE("g_sigma agrees with the rank-one oracle across the grid") {
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double sigma = -10.0 + 20.0 * i / 999.0;
        max_err = std::max(max_err, std::abs(g_sigma(sigma) - g_sigma_oracle(sigma)));
    }
    CHECK(max_err <= 1e-10);
    for (double sigma : {-1.0, 0.0, 1.0, 5.0})
        CHECK(g_sigma(sigma) == doctest::Approx(g_sigma_oracle(sigma)).epsilon(1e-10));
    CHECK(g_sigma_oracle(-1.0) <= 1e-15);
}

TEST_CASE("rank_one_loss_2x2: plateau of the diagonal family, no finite zero for the swap") {
    // diag(1, 2 - sigma): the loss min(1, (2-sigma)^2) plateaus at one.
    CHECK(rank_one_loss_2x2(1, 0, 0, 2.0 - 0.0) == doctest::Approx(1.0));
    CHECK(rank_one_loss_2x2(1, 0, 0, 2.0 - 2.0) == doctest::Approx(0.0));
    CHECK(rank_one_loss_2x2(1, 0, 0, 2.0 - 1.5) == doctest::Approx(0.25));
    // [[0,1],[1,-sigma]] has determinant -1, so the loss never reaches zero.
    for (double sigma : {-100.0, -1.0, 0.0, 1.0, 100.0})
        CHECK(rank_one_loss_2x2(0, 1, 1, -sigma) > 0.0);
    CHECK(rank_one_loss_2x2(0, 1, 1, -1000.0) <= 1e-5);
}

TEST_CASE("spurious valley: canonical two by two instance") {
    SpuriousValleyInstance valley = build_spurious_valley_instance(2, 2, 2, {0, 0, 1, 1, 0});
    CHECK(valley.instance.target == DenseMatrix{{1, 1}, {1, 0}});
    CHECK(valley.in_valley.respects(valley.instance.supports));
    CHECK(valley.optimum.respects(valley.instance.supports));

    CHECK(loss(valley.instance, valley.in_valley) ==
          doctest::Approx(g_sigma(5.0)).epsilon(1e-12));
    CHECK(sigma_coordinate(valley.in_valley, valley.witness) == 5.0);
    CHECK(loss(valley.instance, valley.optimum) <= 1e-28);
    CHECK(sigma_coordinate(valley.optimum, valley.witness) == -1.0);
}

TEST_CASE("spurious valley: the classic explicit point sits inside the valley") {
    // X = [[1,0],[-5,1]], Y = [[-1/5,0],[1,5]]: slice coordinate 5 and loss
    // (6/5)^2, strictly below the barrier height g(1) = 2 though above the
    // slice infimum g(5).
    SpuriousValleyInstance valley = build_spurious_valley_instance(2, 2, 2, {0, 0, 1, 1, 0});
    FactorPair classic{DenseMatrix{{1, 0}, {-5, 1}}, DenseMatrix{{-0.2, 0}, {1, 5}}};
    CHECK(classic.respects(valley.instance.supports));
    CHECK(sigma_coordinate(classic, valley.witness) == 5.0);
    const double value = loss(valley.instance, classic);
    CHECK(value == doctest::Approx(1.44).epsilon(1e-12));
    CHECK(value < g_sigma(1.0));
    CHECK(value >= g_sigma(5.0));
}

TEST_CASE("spurious valley: embedded placement keeps the certificate witness valid") {
    SpuriousWitness w{1, 0, 3, 2, 1};
    SpuriousValleyInstance valley = build_spurious_valley_instance(5, 4, 3, w);
    CHECK(loss(valley.instance, valley.in_valley) ==
          doctest::Approx(g_sigma(5.0)).epsilon(1e-12));
    CHECK(loss(valley.instance, valley.optimum) <= 1e-28);
    TractabilityCertificate cert = certify(valley.instance.supports);
    CHECK(cert.level == TractabilityLevel::Unknown);
    CHECK(cert.spurious_condition_met);
}

TEST_CASE("spurious valley: invalid witnesses are rejected") {
    CHECK_THROWS_AS(build_spurious_valley_instance(2, 2, 2, {0, 0, 0, 1, 0}), PreconditionError);
    CHECK_THROWS_AS(build_spurious_valley_instance(2, 2, 1, {0, 0, 1, 1, 0}), PreconditionError);
}

TEST_CASE("spurious minimum: loss, criticality, and local stability") {
    SpuriousMinimumInstance built = build_spurious_minimum_instance(2.0, 1.0);
    CHECK(loss(built.instance, built.spurious_min) == 1.0);
    CHECK(loss(built.instance, built.optimum) == 0.0);

    auto [gx, gy] = masked_gradient(built.instance, built.spurious_min);
    CHECK(std::sqrt(gx.frobenius_sq() + gy.frobenius_sq()) <= 1e-12);

    std::mt19937_64 rng(97);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        FactorPair p = built.spurious_min;
        // Random feasible direction of norm 1e-3 over the six constrained slots.
        double dir[6];
        double norm = 0.0;
        for (double& d : dir) {
            d = unit(rng);
            norm += d * d;
        }
        norm = std::sqrt(norm);
        const double scale = 1e-3 / norm;
        p.X(0, 0) += scale * dir[0];
        p.X(1, 0) += scale * dir[1];
        p.X(1, 1) += scale * dir[2];
        p.Y(0, 0) += scale * dir[3];
        p.Y(1, 0) += scale * dir[4];
        p.Y(1, 1) += scale * dir[5];
        CHECK(loss(built.instance, p) >= 1.0 - 1e-12);
    }

    CHECK_THROWS_AS(build_spurious_minimum_instance(1.0, 2.0), PreconditionError);
}

TEST_CASE("sigma_coordinate: zero factors and the constructed points") {
    SpuriousValleyInstance valley = build_spurious_valley_instance(2, 2, 2, {0, 0, 1, 1, 0});
    FactorPair zero{DenseMatrix(2, 2), DenseMatrix(2, 2)};
    CHECK(sigma_coordinate(zero, valley.witness) == 0.0);
    CHECK(sigma_coordinate(valley.in_valley, valley.witness) == 5.0);
    CHECK(sigma_coordinate(valley.optimum, valley.witness) == -1.0);
}

TEST_CASE("smart_init_path: flat first half, descent to the optimum") {
    std::mt19937_64 rng(101);
    DenseMatrix a = random_matrix(4, 4, rng);
    SupportPair supports = gen_kron1(2);
    ProblemInstance instance(a, supports);
    FactorPair opt = svd_fsmf2(a, supports);
    FactorPair start = init_factors(supports, 7);

    FeasiblePath path = smart_init_path(instance, opt, start.X, 1000);
    const double a_energy = a.frobenius_sq();
    CHECK(loss(instance, path.sampler(0.0)) == doctest::Approx(a_energy).epsilon(1e-12));
    CHECK(loss(instance, path.sampler(0.25)) == doctest::Approx(a_energy).epsilon(1e-12));
    CHECK(loss(instance, path.sampler(0.5)) == doctest::Approx(a_energy).epsilon(1e-12));
    CHECK(loss(instance, path.sampler(1.0)) ==
          doctest::Approx(loss(instance, opt)).epsilon(1e-12));

    PathCheck check = check_path(path, instance);
    CHECK(check.feasible);
    CHECK(check.monotone);
}

TEST_CASE("smart_init_path: starting at the optimum's left factor still works") {
    std::mt19937_64 rng(103);
    DenseMatrix a = random_matrix(4, 4, rng);
    SupportPair supports = gen_kron2(2);
    ProblemInstance instance(a, supports);
    FactorPair opt = svd_fsmf2(a, supports);
    FeasiblePath path = smart_init_path(instance, opt, opt.X, 512);
    PathCheck check = check_path(path, instance);
    CHECK(check.feasible);
    CHECK(check.monotone);
}

TEST_CASE("smart_init_path is monotone on certified random instances") {
    std::mt19937_64 rng(107);
    int done = 0;
    while (done < 20) {
        const int m = 2 + static_cast<int>(rng() % 4);
        const int n = 2 + static_cast<int>(rng() % 4);
        const int r = 1 + static_cast<int>(rng() % 4);
        SupportPair supports(random_mask(m, r, 0.5, rng), random_mask(n, r, 0.5, rng));
        TractabilityCertificate cert = certify(supports);
        if (cert.level == TractabilityLevel::Unknown) continue;
        ++done;
        ProblemInstance instance(random_matrix(m, n, rng), supports);
        FactorPair opt = svd_fsmf2_certified(instance.target, supports, cert);
        FactorPair start = init_factors(supports, static_cast<std::uint64_t>(done));
        FeasiblePath path = smart_init_path(instance, opt, start.X, 1000);
        PathCheck check = check_path(path, instance);
        CHECK(check.feasible);
        CHECK(check.monotone);
        CHECK(check.max_violation <= 1e-12);
    }
}

TEST_CASE("check_path: constant paths pass, support violations are located") {
    std::mt19937_64 rng(109);
    SupportPair supports = gen_kron1(2);
    ProblemInstance instance(random_matrix(4, 4, rng), supports);
    FactorPair point{project_to_support(random_matrix(4, 4, rng), supports.left),
                     project_to_support(random_matrix(4, 4, rng), supports.right)};
    FeasiblePath constant{[&](double) { return point; }, 64};
    PathCheck ok = check_path(constant, instance);
    CHECK(ok.feasible);
    CHECK(ok.monotone);

    FeasiblePath broken{[&](double t) {
                            FactorPair p = point;
                            if (t > 0.7) p.X(0, 1) = 1.0;  // outside the left mask
                            return p;
                        },
                        64};
    PathCheck bad = check_path(broken, instance);
    CHECK_FALSE(bad.feasible);
    REQUIRE(bad.first_infeasible_t);
    CHECK(*bad.first_infeasible_t > 0.69);
}

TEST_CASE("barrier: linear paths out of the valley cross the slice at high loss") {
    SpuriousValleyInstance valley = build_spurious_valley_instance(2, 2, 2, {0, 0, 1, 1, 0});
    const int samples = 2048;
    // Straight-line feasible path from the in-valley point to the optimum.
    auto lerp = [&](double t) {
        FactorPair p;
        p.X = valley.in_valley.X;
        p.X *= (1.0 - t);
        DenseMatrix tx = valley.optimum.X;
        tx *= t;
        p.X += tx;
        p.Y = valley.in_valley.Y;
        p.Y *= (1.0 - t);
        DenseMatrix ty = valley.optimum.Y;
        ty *= t;
        p.Y += ty;
        return p;
    };
    bool crossed = false;
    double min_loss_at_crossing = 1e300;
    double window_floor = 1e300;
    for (int s = 0; s < samples; ++s) {
        const double t = static_cast<double>(s) / (samples - 1);
        FactorPair p = lerp(t);
        const double sigma = sigma_coordinate(p, valley.witness);
        if (std::abs(sigma - 1.0) <= 0.05) {
            crossed = true;
            min_loss_at_crossing = std::min(min_loss_at_crossing, loss(valley.instance, p));
            window_floor = std::min(window_floor, g_sigma(sigma));
        }
        // Every feasible point is bounded below by the slice infimum.
        CHECK(loss(valley.instance, p) >= g_sigma(sigma) - 1e-9);
    }
    REQUIRE(crossed);
    const double eps_path = g_sigma(1.0) - window_floor + 1e-9;
    CHECK(min_loss_at_crossing >= g_sigma(1.0) - eps_path);
    CHECK(min_loss_at_crossing >= 1.8);  // near the barrier height of two
}
