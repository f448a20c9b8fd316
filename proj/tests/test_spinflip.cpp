#include <doctest.h>

#include <cmath>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/spinflip.hpp"
#include "kuramoto/util.hpp"

using namespace kuramoto;

TEST_SUITE_BEGIN("spinflip");

TEST_CASE("single tagged oscillator rates") {
    {
        const KinkParams params(0.5, 0.0, 2.0, 1.0);
        CHECK(std::abs(kink_rhs(params, stable_phase(params))) < 1e-15);
        CHECK(params.trapped());
        CHECK(params.detuning() == 0.5);
    }
    {
        const KinkParams params(0.7, 0.7, 2.0, 1.0);  // zero detuning
        CHECK(std::abs(kink_rhs(params, pi)) < 1e-15);
        CHECK(kink_rhs(params, pi / 2.0) == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(stable_phase(params) == 0.0);
        CHECK(unstable_phase(params) == doctest::Approx(pi).epsilon(1e-15));
    }
    CHECK_THROWS_AS(KinkParams(0.0, 0.0, 1.0, -1.0), Error);
}

TEST_CASE("relaxation rate") {
    CHECK(relaxation_rate(KinkParams(0.3, 0.3, 2.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(relaxation_rate(KinkParams(3.0, 0.0, 5.0, 1.0)) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)relaxation_rate(KinkParams(3.0, 0.0, 2.0, 1.0)), ImaginaryRate);
    CHECK_FALSE(KinkParams(3.0, 0.0, 2.0, 1.0).trapped());
    // strongly coupled limit: rate approaches lambda J
    const double rate = relaxation_rate(KinkParams(1.0, 0.0, 1e6, 1.0));
    CHECK(rate / 1e6 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("deviation profile") {
    const KinkParams params(0.0, 0.0, 2.0, 0.5);  // rate 1
    CHECK(kink_analytic(params, 1.3, 0.0) == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(std::abs(kink_analytic(params, 2.0, 40.0)) < 1e-15);
    // closed-form spot value: delta0 = pi/2 at unit rate and unit time
    CHECK(kink_analytic(params, pi / 2.0, 1.0) ==
          doctest::Approx(2.0 * std::atan(std::exp(-1.0))).epsilon(1e-15));
    CHECK_THROWS_AS((void)kink_analytic(params, pi, 1.0), Error);

    // oracle: integrate delta' = -rate sin(delta) directly
    const double rate = relaxation_rate(params);
    IntegratorConfig cfg;
    cfg.t_end = 8.0;
    cfg.sample_dt = 0.25;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-14;
    std::vector<double> y{2.4};
    double worst = 0.0;
    integrate_ode(
        [rate](double, const std::vector<double>& s, std::vector<double>& ds) {
            ds.assign(1, -rate * std::sin(s[0]));
        },
        y, cfg,
        [&](double t, const std::vector<double>& s) {
            worst = std::max(worst, std::abs(s[0] - kink_analytic(params, 2.4, t)));
        });
    CHECK(worst < 1e-8);
}

TEST_CASE("fitted relaxation rate matches the linearized prediction") {
    const KinkParams params(0.0, 0.0, 2.0, 1.0);  // rate exactly 2
    IntegratorConfig cfg;
    cfg.t_end = 12.0;
    cfg.sample_dt = 0.1;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-14;
    const auto traj = integrate_kink(params, 1.0, cfg);
    const double fitted = fitted_relaxation_rate(params, traj);
    CHECK(std::abs(fitted - 2.0) / 2.0 < 0.01);

    // detuned case: rate sqrt((lambda J)^2 - m^2)
    const KinkParams detuned(0.6, 0.0, 2.0, 1.0);
    const auto traj2 = integrate_kink(detuned, 1.3, cfg);
    const double expect = relaxation_rate(detuned);
    CHECK(std::abs(fitted_relaxation_rate(detuned, traj2) - expect) / expect < 0.01);

    Trajectory<double> tiny;
    tiny.times = {0.0};
    tiny.states = {1.0};
    CHECK_THROWS_AS((void)fitted_relaxation_rate(params, tiny), InsufficientData);
}

TEST_CASE("phase flip across the unstable point") {
    const KinkParams params(0.4, 0.4, 2.0, 1.0);  // unstable phase at pi
    IntegratorConfig cfg;
    cfg.t_end = 30.0;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-14;
    cfg.sample_dt = 30.0;
    const double below = integrate_kink(params, pi - 1e-6, cfg).states.back();
    const double above = integrate_kink(params, pi + 1e-6, cfg).states.back();
    CHECK(std::abs(below) < 1e-6);              // relaxes back to 0
    CHECK(std::abs(above - 2.0 * pi) < 1e-6);   // flips through to the next sheet
    CHECK(std::abs((above - below) - 2.0 * pi) < 1e-6);
}

TEST_CASE("tagged pair rates") {
    {
        // coincident pair: the mutual term vanishes and each member sees the
        // single-oscillator flow
        const TwoSpinParams pair(0.3, 0.3, 0.1, 1.7, 0.9, 12);
        const KinkParams single(0.3, 0.1, 1.7, 0.9);
        const auto rates = two_spin_rhs(pair, {0.8, 0.8});
        CHECK(rates[0] == doctest::Approx(kink_rhs(single, 0.8)).epsilon(1e-15));
        CHECK(rates[1] == doctest::Approx(kink_rhs(single, 0.8)).epsilon(1e-15));
    }
    {
        // hand value at zero detuning: phi = (0.1, -0.1), lambda = J = 1, N = 10
        const TwoSpinParams pair(0.0, 0.0, 0.0, 1.0, 1.0, 10);
        const auto rates = two_spin_rhs(pair, {0.1, -0.1});
        const double expect = -(std::sin(0.1) + 0.1 * std::sin(0.2));
        CHECK(rates[0] == doctest::Approx(expect).epsilon(1e-14));
        CHECK(rates[1] == doctest::Approx(-expect).epsilon(1e-14));
    }
    {
        // half-sum identity: (phi'_1 + phi'_2)/2 = m - lambda J sin(sigma) cos(delta),
        // the mutual terms cancel exactly
        auto rng = make_rng(73);
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        const TwoSpinParams pair(0.4, -0.2, 0.1, 1.3, 0.8, 7);
        const double m = pair.mean_detuning();
        for (int rep = 0; rep < 100; ++rep) {
            const double p1 = dist(rng);
            const double p2 = dist(rng);
            const auto rates = two_spin_rhs(pair, {p1, p2});
            const double sigma = 0.5 * (p1 + p2);
            const double delta = 0.5 * (p1 - p2);
            const double expect = m - pair.lambda * pair.J * std::sin(sigma) * std::cos(delta);
            CHECK(std::abs(0.5 * (rates[0] + rates[1]) - expect) < 1e-13);
        }
    }
    CHECK_THROWS_AS(TwoSpinParams(0.0, 0.0, 0.0, 1.0, 1.0, 2), DimensionMismatch);
    CHECK_THROWS_AS(TwoSpinParams(0.0, 0.0, 0.0, 0.0, 1.0, 5), ZeroCoupling);
}

TEST_CASE("pair stationary phases in the strong-coupling form") {
    {
        const TwoSpinParams pair(0.5, 0.5, 0.5, 2.0, 1.0, 20);
        const auto a = two_spin_asymptotic(pair);
        CHECK(a.sigma == 0.0);
        CHECK(a.delta == 0.0);
    }
    {
        // zero mean detuning, splitting 0.2: delta = 0.1 / (lambda J) exactly
        const TwoSpinParams pair(0.1, -0.1, 0.0, 2.0, 1.0, 20);
        const auto a = two_spin_asymptotic(pair);
        CHECK(a.sigma == 0.0);
        CHECK(a.delta == doctest::Approx(0.05).epsilon(1e-15));
    }
    CHECK_THROWS_AS((void)two_spin_asymptotic(TwoSpinParams(3.0, 3.0, 0.0, 1.0, 1.0, 5)),
                    ImaginaryRate);
    {
        const TwoSpinParams pair(0.0, 0.0, 0.0, 1.0, 1.0, 10);
        CHECK(pair.with_background(1.0).J == doctest::Approx(0.8).epsilon(1e-15));
    }
}

TEST_CASE("pair flow settles onto the predicted stationary point") {
    // large population: the predicted phases ignore the mutual 1/N shift, so
    // push N high enough that the neglected term sits below the tolerance
    const TwoSpinParams pair(0.15, -0.05, 0.0, 2.0, 1.0, 200);
    const auto a = two_spin_asymptotic(pair);
    IntegratorConfig cfg;
    cfg.t_end = 60.0;
    cfg.sample_dt = 60.0;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-14;
    const auto traj = integrate_two_spin(pair, {0.3, 0.1}, cfg);
    const auto& last = traj.states.back();
    const double sigma = 0.5 * (last[0] + last[1]);
    const double delta = 0.5 * (last[0] - last[1]);
    CHECK(std::abs(std::sin(sigma) - a.sigma) < 1e-3);
    CHECK(std::abs(delta - a.delta) < 1e-3);
}

TEST_SUITE_END();
