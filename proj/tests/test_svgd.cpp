#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "svgd/svgd.hpp"
#include "test_util.hpp"

using namespace svgd;

namespace {

Ensemble single_particle(const Vec& x) {
    Ensemble ens;
    ens.positions.resize(1, x.size());
    ens.positions.row(0) = x;
    return ens;
}

}  // namespace

TEST_CASE("direction reduces to grad V for one RBF particle") {
    const Target normal = Target::gaussian(2);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    Vec x(2);
    x << 0.7, -1.2;
    const Ensemble ens = single_particle(x);
    const Vec dir = direction(ens, normal, spec, x);
    CHECK((dir - grad_potential(normal, x)).norm() <= 1e-15);
}

TEST_CASE("direction vanishes for one particle at the mode") {
    const Target gg4 = Target::generalized_gaussian(2, 4.0);
    const KernelSpec spec = KernelSpec::imq(1.0, -0.5, 2);
    const Ensemble ens = single_particle(Vec::Zero(2));
    CHECK(direction(ens, gg4, spec, Vec::Zero(2)).norm() == 0.0);
}

TEST_CASE("direction cancels at the midpoint of a symmetric pair") {
    const Target normal = Target::gaussian(2);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    Ensemble ens;
    ens.positions.resize(2, 2);
    ens.positions << 1.0, 0.0, -1.0, 0.0;

    // Brute-force expansion of the two-term sum.
    Vec expected = Vec::Zero(2);
    for (int j = 0; j < 2; ++j) {
        const Vec xj = ens.positions.row(j);
        expected += grad_potential(normal, xj) * eval(spec, xj, Vec::Zero(2)) -
                    grad1(spec, xj, Vec::Zero(2));
    }
    expected /= 2.0;
    CHECK(expected.norm() <= 1e-16);
    CHECK(direction(ens, normal, spec, Vec::Zero(2)).norm() <= 1e-16);
}

TEST_CASE("stein_kernel closed forms") {
    const Target gg4 = Target::generalized_gaussian(2, 4.0);
    const KernelSpec rbf = KernelSpec::rbf(1.0, 2);
    CHECK(stein_kernel(gg4, rbf, Vec::Zero(2), Vec::Zero(2)) ==
          doctest::Approx(2.0));  // only the trace term survives

    const Target normal = Target::gaussian(2);
    Vec x(2);
    x << 1.0, 0.0;
    CHECK(stein_kernel(normal, rbf, x, x) == doctest::Approx(3.0));
}

TEST_CASE("stein_kernel is symmetric") {
    std::mt19937_64 rng(31);
    const Target gg4 = Target::generalized_gaussian(3, 4.0);
    const KernelSpec spec = KernelSpec::imq(1.0, -0.5, 3);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec x = test::random_vec(rng, 3);
        const Vec y = test::random_vec(rng, 3);
        const double uxy = stein_kernel(gg4, spec, x, y);
        const double uyx = stein_kernel(gg4, spec, y, x);
        CHECK(uxy == doctest::Approx(uyx).epsilon(1e-14));
    }
}

TEST_CASE("ksd_squared single-particle closed forms") {
    const Target gg4_d2 = Target::generalized_gaussian(2, 4.0);
    const Ensemble at_mode2 = single_particle(Vec::Zero(2));
    CHECK(ksd_squared(at_mode2, gg4_d2, KernelSpec::rbf(1.0, 2)) ==
          doctest::Approx(2.0));

    const Target gg4_d4 = Target::generalized_gaussian(4, 4.0);
    const Ensemble at_mode4 = single_particle(Vec::Zero(4));
    CHECK(ksd_squared(at_mode4, gg4_d4, KernelSpec::imq(1.0, -0.5, 4)) ==
          doctest::Approx(4.0));
}

TEST_CASE("ksd_squared is nonnegative up to round-off") {
    std::mt19937_64 rng(32);
    const Target normal = Target::gaussian(2);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const Ensemble ens = test::random_ensemble(rng, 1 + (int)(rng() % 15), 2);
        CHECK(ksd_squared(ens, normal, spec) >= -1e-12);
    }
}

TEST_CASE("direction_norm_squared equals ksd_squared") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 5);
        const int n = 1 + static_cast<int>(rng() % 20);
        Target target;
        switch (trial % 3) {
            case 0: target = Target::gaussian(d, 1.2); break;
            case 1: target = Target::generalized_gaussian(d, 4.0); break;
            default: target = test::random_lasso(rng, d); break;
        }
        const KernelSpec spec = trial % 2 == 0 ? KernelSpec::rbf(0.9, d)
                                               : KernelSpec::imq(1.0, -0.5, d);
        const Ensemble ens = test::random_ensemble(rng, n, d);
        const double a = ksd_squared(ens, target, spec);
        const double b = direction_norm_squared(ens, target, spec);
        CHECK(std::abs(a - b) <= 1e-10 * std::max({std::abs(a), std::abs(b), 1e-6}));
    }
}

TEST_CASE("direction_norm_squared degeneracy for identical particles") {
    const Target gg4 = Target::generalized_gaussian(2, 4.0);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    Vec x(2);
    x << 0.4, -0.9;
    Ensemble copies;
    copies.positions = x.transpose().replicate(5, 1);
    const Ensemble one = single_particle(x);
    CHECK(direction_norm_squared(copies, gg4, spec) ==
          doctest::Approx(direction_norm_squared(one, gg4, spec)));
    CHECK(direction_norm_squared(one, gg4, spec) ==
          doctest::Approx(stein_kernel(gg4, spec, x, x)));
}

TEST_CASE("svgd_step fixed point at the mode") {
    const Target gg4 = Target::generalized_gaussian(2, 4.0);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    const Ensemble ens = single_particle(Vec::Zero(2));
    Ensemble out;
    REQUIRE(svgd_step(ens, gg4, spec, 0.1, out));
    CHECK(out.positions == ens.positions);
}

TEST_CASE("svgd_step is plain gradient descent for N = 1 with RBF") {
    const Target normal = Target::gaussian(2);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    Vec x(2);
    x << 1.0, 0.0;
    Ensemble out;
    REQUIRE(svgd_step(single_particle(x), normal, spec, 0.1, out));
    CHECK(out.positions(0, 0) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(out.positions(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("svgd_step preserves a symmetric pair") {
    const Target normal = Target::gaussian(2);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    Ensemble ens;
    ens.positions.resize(2, 2);
    ens.positions << 1.0, 0.0, -1.0, 0.0;
    Ensemble out;
    REQUIRE(svgd_step(ens, normal, spec, 0.2, out));
    CHECK(out.positions(0, 0) == doctest::Approx(-out.positions(1, 0)).epsilon(1e-14));
    CHECK(out.positions(0, 1) == doctest::Approx(-out.positions(1, 1)));
}

TEST_CASE("svgd_step flags non-finite updates") {
    const Target gg4 = Target::generalized_gaussian(2, 4.0);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    Vec x(2);
    x << 1.0, 0.0;
    Ensemble out;
    CHECK_FALSE(svgd_step(single_particle(x), gg4, spec, 1e308, out));
    CHECK_THROWS_AS(svgd_step(single_particle(x), gg4, spec, 0.0, out),
                    std::invalid_argument);
}

TEST_CASE("iteration_stats is identical for any worker count") {
    std::mt19937_64 rng(34);
    const Target gg4 = Target::generalized_gaussian(3, 4.0);
    const KernelSpec spec = KernelSpec::imq(1.0, -0.5, 3);
    const Ensemble ens = test::random_ensemble(rng, 57, 3);
    const IterationStats one = iteration_stats(ens, gg4, spec, true, 1);
    const IterationStats four = iteration_stats(ens, gg4, spec, true, 4);
    CHECK(one.ksd2 == four.ksd2);
    CHECK(one.mean_grad_norm == four.mean_grad_norm);
    CHECK(one.direction == four.direction);
}

TEST_CASE("permuting particles permutes the update") {
    std::mt19937_64 rng(35);
    const Target gg4 = Target::generalized_gaussian(2, 4.0);
    const KernelSpec spec = KernelSpec::rbf(1.0, 2);
    const Ensemble ens = test::random_ensemble(rng, 12, 2);

    Ensemble reversed;
    reversed.positions = ens.positions.colwise().reverse().eval();

    Ensemble out_a, out_b;
    REQUIRE(svgd_step(ens, gg4, spec, 0.05, out_a));
    REQUIRE(svgd_step(reversed, gg4, spec, 0.05, out_b));

    const Mat back = out_b.positions.colwise().reverse();
    CHECK((out_a.positions - back).cwiseAbs().maxCoeff() <= 1e-12);
}
