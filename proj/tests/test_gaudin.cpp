#include <doctest.h>

#include <cmath>
#include <vector>

#include "kuramoto/analysis.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/gaudin.hpp"
#include "kuramoto/util.hpp"

using namespace kuramoto;

namespace {

Vec3 rotate_about(const Vec3& axis, const Vec3& v, double angle) {
    // Rodrigues rotation; axis must be unit length
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return c * v + s * cross(axis, v) + (1.0 - c) * dot(axis, v) * axis;
}

}  // namespace

TEST_SUITE_BEGIN("gaudin");

TEST_CASE("pseudospin configurations") {
    CHECK_THROWS_AS(PseudoSpinConfig({Vec3{1.0, 0.0, 0.0}}), NonUnimodularInput);
    CHECK_THROWS_AS(PseudoSpinConfig(std::vector<Vec3>{}), DimensionMismatch);
    const auto aligned = PseudoSpinConfig::aligned_x(4);
    CHECK(aligned.size() == 4);
    CHECK(aligned.taus[2].x == 0.5);
    CHECK(aligned.max_length_deviation() == 0.0);
    const auto cfg = PseudoSpinConfig::from_angles({0.3, 1.2, 2.4}, {0.0, -1.1, 2.8});
    CHECK(cfg.max_length_deviation() < 1e-12);
    CHECK_THROWS_AS(PseudoSpinConfig::from_angles({0.3}, {0.0, 1.0}), DimensionMismatch);
}

TEST_CASE("spectrum centering") {
    CHECK_THROWS_AS(RichardsonParams({1.0, 2.0, 3.0}, 0.5), Error);
    CHECK_THROWS_AS(RichardsonParams({}, 0.5), DimensionMismatch);
    {
        const auto rp = richardson_map(ModelParams(FrequencySpec({1.0, 2.0, 3.0}), 3.0));
        REQUIRE(rp.epsilons.size() == 3);
        CHECK(rp.epsilons[0] == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(rp.epsilons[1] == doctest::Approx(0.0));
        CHECK(rp.epsilons[2] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rp.g == doctest::Approx(1.0).epsilon(1e-15));
    }
    {
        const auto rp = richardson_map(ModelParams(FrequencySpec({0.7, 0.7, 0.7, 0.7}), 2.0));
        for (double e : rp.epsilons) CHECK(e == 0.0);
        CHECK(rp.g == doctest::Approx(0.5).epsilon(1e-15));
    }
    {
        // a uniform frequency shift leaves the centered spectrum unchanged
        const auto a = richardson_map(ModelParams(FrequencySpec({0.2, -0.5, 0.9}), 1.3));
        const auto b = richardson_map(ModelParams(FrequencySpec({10.2, 9.5, 10.9}), 1.3));
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(a.epsilons[j] - b.epsilons[j]) < 1e-13);
    }
}

TEST_CASE("pseudospin energy fixed values") {
    const RichardsonParams rp({-1.0, 0.2, 0.8}, 0.7);
    {
        // all spins at the north pole: the planar field vanishes and the
        // tilt term telescopes to the (centered) spectrum sum, i.e. zero
        const auto poles = PseudoSpinConfig::from_angles({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0});
        CHECK(std::abs(gaudin_h1(rp, poles)) < 1e-15);
    }
    {
        // aligned in-plane: energy is -g N^2 / 4
        CHECK(gaudin_h1(rp, PseudoSpinConfig::aligned_x(3)) ==
              doctest::Approx(-0.7 * 9.0 / 4.0).epsilon(1e-14));
    }
    {
        // mixed poles pick up signed spectrum entries
        const auto mixed = PseudoSpinConfig::from_angles({0.0, pi, pi}, {0.0, 0.0, 0.0});
        // +eps_0 - eps_1 - eps_2 = -1 - 0.2 - 0.8
        CHECK(gaudin_h1(rp, mixed) == doctest::Approx(-2.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS((void)gaudin_h1(rp, PseudoSpinConfig::aligned_x(2)), DimensionMismatch);
}

TEST_CASE("energy gradient against sphere-constrained differences") {
    const RichardsonParams rp({-0.9, 0.4, 0.5}, 1.3);
    auto rng = make_rng(79);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto base = PseudoSpinConfig::from_angles(sample_uniform(rng, 3, 0.1, pi - 0.1),
                                                    sample_angles(rng, 3));
    const auto grad = gaudin_h1_gradient(rp, base);
    const double h = 1e-5;
    for (std::size_t j = 0; j < 3; ++j) {
        const Vec3 axis = normalized(Vec3{gauss(rng), gauss(rng), gauss(rng)});
        // rotating one spin keeps the configuration admissible; the rate of
        // change along the rotation is grad . (axis x tau)
        const double expected = dot(grad[j], cross(axis, base.taus[j]));
        auto plus = base.taus;
        auto minus = base.taus;
        plus[j] = rotate_about(axis, base.taus[j], h);
        minus[j] = rotate_about(axis, base.taus[j], -h);
        const double fd = (gaudin_h1(rp, PseudoSpinConfig(plus)) -
                           gaudin_h1(rp, PseudoSpinConfig(minus))) /
                          (2.0 * h);
        CHECK(std::abs(fd - expected) < 1e-8);
    }
}

TEST_CASE("halved Pauli matrices satisfy the product and commutator identities") {
    CHECK(pauli_structure_check() <= 1e-15);
}

TEST_CASE("perturbation energy around a synchronization state") {
    const FrequencySpec freqs({0.4, -0.1, -0.3});
    const double lambda = 3.0;
    const auto base = solve_self_consistent_J(freqs, lambda, {1, 1, 1});
    REQUIRE(base.has_value());
    {
        CHECK(heisenberg_perturbation(ModelParams(freqs, lambda), *base, {0.0, 0.0, 0.0}) == 0.0);
    }
    {
        // single excitation: -lambda |J| s cos(phi_1)
        const double s = 0.37;
        const double expect = -lambda * base->J_mod * s * std::cos(base->phis[1]);
        CHECK(heisenberg_perturbation(ModelParams(freqs, lambda), *base, {0.0, s, 0.0}) ==
              doctest::Approx(expect).epsilon(1e-13));
    }
    {
        // flipping one excitation against the field costs energy
        const std::vector<double> up{0.2, 0.2, 0.2};
        std::vector<double> flipped = up;
        flipped[0] = -0.2;
        const double cost = heisenberg_perturbation(ModelParams(freqs, lambda), *base, flipped) -
                            heisenberg_perturbation(ModelParams(freqs, lambda), *base, up);
        CHECK(cost > 0.0);
        CHECK(cost == doctest::Approx(2.0 * lambda * base->J_mod * 0.2 * std::cos(base->phis[0]))
                          .epsilon(1e-12));
    }
    CHECK_THROWS_AS(
        (void)heisenberg_perturbation(ModelParams(freqs, lambda), *base, {0.0, 0.0}),
        DimensionMismatch);
}

TEST_CASE("energy minimization on the sphere product") {
    {
        // decoupled limit: each spin sits at the pole opposing its level,
        // total energy -sum |eps_j|
        const RichardsonParams rp({-0.8, -0.1, 0.9}, 0.0);
        const auto result = minimize_h1(rp, 11, 8, 1000);
        CHECK(std::abs(result.value - (-(0.8 + 0.1 + 0.9))) < 1e-12);
        CHECK(result.config.taus[0].z > 0.49);   // opposes eps < 0
        CHECK(result.config.taus[2].z < -0.49);  // opposes eps > 0
    }
    {
        // strong coupling: bounded between the in-plane optimum and the
        // decoupled floor added to it
        const RichardsonParams rp({-0.5, 0.1, 0.4}, 5.0);
        const double plane = -5.0 * 9.0 / 4.0;
        const auto result = minimize_h1(rp, 11, 16, 1000);
        CHECK(result.value <= plane + 1e-12);
        CHECK(result.value >= plane - (0.5 + 0.1 + 0.4) - 1e-12);
        CHECK(result.config.max_length_deviation() < 1e-9);
    }
    {
        // deterministic for a fixed seed
        const RichardsonParams rp({-0.5, 0.1, 0.4}, 1.0);
        const auto a = minimize_h1(rp, 29, 8, 300);
        const auto b = minimize_h1(rp, 29, 8, 300);
        CHECK(a.value == b.value);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(a.config.taus[j].x == b.config.taus[j].x);
            CHECK(a.config.taus[j].y == b.config.taus[j].y);
            CHECK(a.config.taus[j].z == b.config.taus[j].z);
        }
    }
    CHECK_THROWS_AS((void)minimize_h1(RichardsonParams({-0.5, 0.5}, 1.0), 1, 0, 10), Error);
}

TEST_SUITE_END();
