#include <doctest.h>

#include <cmath>

#include "kuramoto/analysis.hpp"
#include "kuramoto/core.hpp"
#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/util.hpp"

using namespace kuramoto;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("coupling bounds on fixed inputs") {
    {
        const auto b = coupling_bounds(FrequencySpec({1.0, 0.0}));
        CHECK(b.lambda_c == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b.lambda_s == doctest::Approx(1.0).epsilon(1e-15));
    }
    {
        const auto b = coupling_bounds(FrequencySpec({0.7, 0.7, 0.7}));
        CHECK(b.lambda_c == 0.0);
        CHECK(b.lambda_s == 0.0);
    }
    {
        const auto b = coupling_bounds(FrequencySpec({0.0, 1.0, 3.0}));
        CHECK(b.lambda_c == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(b.lambda_s == doctest::Approx(2.25).epsilon(1e-15));
    }
    auto rng = make_rng(47);
    for (int rep = 0; rep < 50; ++rep) {
        const auto b = coupling_bounds(FrequencySpec(sample_uniform(rng, 6, -2.0, 2.0)));
        CHECK(b.lambda_c <= b.lambda_s);
        CHECK(b.lambda_c >= 0.0);
    }
}

TEST_CASE("locking detection") {
    IntegratorConfig cfg;
    cfg.t_end = 120.0;
    cfg.sample_dt = 0.5;
    {
        // free rotation with distinct frequencies never locks
        const ModelParams params(FrequencySpec({0.3, -0.4, 1.0}), 0.0);
        const auto traj = integrate(params, PhaseState({0.0, 1.0, 2.0}), cfg);
        CHECK(detect_locking(traj, 50.0, 1e-3).empty());
    }
    {
        // identical frequencies, converged: every pair locks
        const ModelParams params(FrequencySpec({0.5, 0.5, 0.5, 0.5}), 1.0);
        const auto traj = integrate(params, PhaseState({0.0, 1.0, 2.5, 4.0}), cfg);
        CHECK(detect_locking(traj, 30.0, 1e-6).size() == 6);
    }
    {
        // two oscillators above the full-locking bound
        const ModelParams params(FrequencySpec({0.5, -0.5}), 2.0);
        const auto traj = integrate(params, PhaseState({1.0, -0.5}), cfg);
        const auto pairs = detect_locking(traj, 30.0, 1e-6);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].first == 0);
        CHECK(pairs[0].second == 1);
    }
    Trajectory<PhaseState> tiny;
    tiny.times = {0.0};
    tiny.states = {PhaseState({0.0})};
    CHECK_THROWS_AS((void)detect_locking(tiny, 10.0, 1e-3), InsufficientData);
}

TEST_CASE("pair lock residual") {
    const ModelParams params(FrequencySpec({0.5, -0.5}), 2.0);
    IntegratorConfig cfg;
    cfg.t_end = 80.0;
    cfg.sample_dt = 80.0;
    const auto traj = integrate(params, PhaseState({1.0, -0.5}), cfg);
    const auto z = traj.states.back().unit_complex();
    const auto r = order_parameter(traj.states.back()).r;
    CHECK(std::abs(pair_lock_residual(z, r, 0, 1, params)) < 1e-6);

    {
        // equal frequencies after convergence: residual 0 and (z_j - z_k)/r real
        const ModelParams eq(FrequencySpec({0.2, 0.2, 0.2}), 1.0);
        const auto eq_traj = integrate(eq, PhaseState({0.0, 1.0, 2.0}), cfg);
        const auto ze = eq_traj.states.back().unit_complex();
        const auto re = order_parameter(eq_traj.states.back()).r;
        CHECK(std::abs(pair_lock_residual(ze, re, 0, 2, eq)) < 1e-7);
        CHECK(std::abs(((ze[0] - ze[2]) / re).imag()) < 1e-6);
    }
    const ModelParams zero(FrequencySpec({0.5, -0.5}), 0.0);
    CHECK_THROWS_AS((void)pair_lock_residual(z, r, 0, 1, zero), ZeroCoupling);
    CHECK_THROWS_AS((void)pair_lock_residual(z, r, 1, 1, params), SameIndex);
}

TEST_CASE("triple lock residual") {
    {
        // the sine-linear solution family satisfies the cyclic identity
        const std::array<double, 3> omegas{1.0, 2.0, 4.0};
        const double beta = (1.0 + 2.0 + 4.0) / 3.0;
        std::array<double, 3> phis{};
        for (int j = 0; j < 3; ++j) phis[j] = std::asin(0.1 * (omegas[j] - beta));
        CHECK(std::abs(triple_lock_residual(phis, omegas)) < 1e-12);
    }
    CHECK(triple_lock_residual({0.3, 1.2, -0.8}, {0.5, 0.5, 0.5}) == doctest::Approx(0.0));
    CHECK(std::abs(triple_lock_residual({0.3, 1.2, -0.8}, {1.0, 2.0, 5.0})) > 1e-3);
}

TEST_CASE("self-consistent mean-field solver") {
    {
        // equal frequencies, all-plus sector: |J| = 1 for any positive coupling
        const auto sol = solve_self_consistent_J(FrequencySpec({0.3, 0.3, 0.3}), 0.7, {1, 1, 1});
        REQUIRE(sol.has_value());
        CHECK(sol->J_mod == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        // equal frequencies, mixed signs: |J| = (N+ - N-)/N
        const auto sol =
            solve_self_consistent_J(FrequencySpec(std::vector<double>(5, 0.1)), 1.3, {1, 1, 1, 1, -1});
        REQUIRE(sol.has_value());
        CHECK(sol->J_mod == doctest::Approx(0.6).epsilon(1e-12));
    }
    {
        // two oscillators: the quartic J^4 - J^2 + w^2/lambda^2 = 0 in closed form
        const auto sol = solve_self_consistent_J(FrequencySpec({0.5, -0.5}), 2.0, {1, 1});
        REQUIRE(sol.has_value());
        CHECK(sol->J_mod == doctest::Approx(0.9659258262890683).epsilon(1e-12));
        CHECK(std::abs(std::sin(sol->phis[0]) - 0.5 / (2.0 * sol->J_mod)) < 1e-12);
        CHECK(sol->epsilons[0] == 1);
    }
    {
        // random two-oscillator cases against the closed-form largest root
        auto rng = make_rng(53);
        std::uniform_real_distribution<double> w_dist(0.05, 0.45);
        std::uniform_real_distribution<double> l_dist(1.5, 6.0);
        for (int rep = 0; rep < 200; ++rep) {
            const double w = w_dist(rng);
            const double lambda = l_dist(rng);
            const auto sol = solve_self_consistent_J(FrequencySpec({w, -w}), lambda, {1, 1});
            const double disc = 1.0 - 4.0 * w * w / (lambda * lambda);
            REQUIRE(sol.has_value());
            const double expect = std::sqrt((1.0 + std::sqrt(disc)) / 2.0);
            CHECK(std::abs(sol->J_mod - expect) < 1e-10);
        }
    }
    {
        // below the sector threshold there is no real solution
        const auto sol = solve_self_consistent_J(FrequencySpec({1.0, -1.0}), 1.2, {1, 1});
        CHECK_FALSE(sol.has_value());
    }
    CHECK_THROWS_AS((void)solve_self_consistent_J(FrequencySpec({0.5, -0.5}), 0.0, {1, 1}),
                    ZeroCoupling);
}

TEST_CASE("asymptotic expansion of the mean field") {
    {
        const double v = asymptotic_J(FrequencySpec({0.4, 0.4}), 3.0, {1, 1});
        CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    }
    {
        // all-plus sector: 1 - Var(omega) / (2 lambda^2)
        const FrequencySpec freqs({0.5, -0.1, 0.3, -0.7});
        const double lambda = 7.0;
        const double expect = 1.0 - freqs.variance() / (2.0 * lambda * lambda);
        CHECK(asymptotic_J(freqs, lambda, {1, 1, 1, 1}) == doctest::Approx(expect).epsilon(1e-14));
    }
    {
        // decay order of the expansion error against the exact solver
        const FrequencySpec freqs({0.5, -0.5});
        std::vector<double> log_lambda;
        std::vector<double> log_err;
        for (double lambda : {4.0, 8.0, 16.0, 32.0, 64.0}) {
            const auto sol = solve_self_consistent_J(freqs, lambda, {1, 1});
            REQUIRE(sol.has_value());
            const double err = std::abs(asymptotic_J(freqs, lambda, {1, 1}) - sol->J_mod);
            log_lambda.push_back(std::log(lambda));
            log_err.push_back(std::log(err));
        }
        CHECK(linear_fit(log_lambda, log_err).slope <= -3.0);
    }
}

TEST_CASE("global synchronization residual") {
    const FrequencySpec freqs({0.4, -0.1, -0.3});
    const double lambda = 3.0;
    const auto sol = solve_self_consistent_J(freqs, lambda, {1, 1, 1});
    REQUIRE(sol.has_value());
    const ModelParams params(freqs, lambda);
    CHECK(std::abs(global_sync_residual(sol->phase_state(0.0), params)) < 1e-10);

    // converged simulation satisfies the same balance
    IntegratorConfig cfg;
    cfg.t_end = 120.0;
    cfg.sample_dt = 120.0;
    const auto traj = integrate(params, PhaseState({1.0, 2.0, 3.0}), cfg);
    CHECK(std::abs(global_sync_residual(traj.states.back(), params)) < 1e-5);

    CHECK_THROWS_AS((void)global_sync_residual(PhaseState({0.2, 0.2, 0.2}), params),
                    DegenerateDenominator);
}

TEST_CASE("classification of coherence series") {
    const std::vector<double> partial(20, 0.62);
    CHECK(classify(partial) == SyncClass::partially_synchronized);
    const std::vector<double> full(20, 0.9999);
    CHECK(classify(full) == SyncClass::fully_synchronized);
    const std::vector<double> quiet(20, 1e-4);
    CHECK(classify(quiet) == SyncClass::unsynchronized);
    std::vector<double> weak;
    for (int i = 0; i < 40; ++i) weak.push_back(0.08 + 0.05 * std::sin(0.7 * i));
    CHECK(classify(weak) == SyncClass::unsynchronized);
    std::vector<double> churn;
    for (int i = 0; i < 40; ++i) churn.push_back(0.5 + 0.3 * std::sin(0.7 * i));
    CHECK(classify(churn) == SyncClass::nonstationary);
    CHECK_THROWS_AS((void)classify(std::vector<double>{0.5}), InsufficientData);
    CHECK(to_string(SyncClass::fully_synchronized) == "fully_synchronized");
}

TEST_CASE("settling to steady state") {
    {
        const ModelParams params(FrequencySpec({0.5, -0.5}), 2.0);
        const auto result = settle(params, PhaseState({1.0, -0.5}), 200.0);
        CHECK(result.converged);
        const double delta = wrap_angle(result.state.thetas[0] - result.state.thetas[1]);
        CHECK(std::abs(delta - std::asin(0.5)) < 1e-6);
        CHECK(result.r_mod == doctest::Approx(0.9659258262890683).epsilon(1e-6));
    }
    {
        const ModelParams params(FrequencySpec({0.8, -0.8}), 0.2);  // far below locking
        const auto result = settle(params, PhaseState({1.0, -0.5}), 60.0);
        CHECK_FALSE(result.converged);
    }
}

TEST_CASE("solver matches long-time simulation above the locking bound") {
    auto rng = make_rng(59);
    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 3 + static_cast<std::size_t>(rep);
        const FrequencySpec freqs(sample_uniform(rng, n, -1.0, 1.0));
        const double lambda = 2.0 * coupling_bounds(freqs).lambda_s + 0.5;
        const auto sol = solve_self_consistent_J(freqs, lambda, std::vector<int>(n, 1));
        REQUIRE(sol.has_value());
        const ModelParams params(freqs, lambda);
        const auto settled = settle(params, PhaseState(sample_angles(rng, n)), 300.0);
        REQUIRE(settled.converged);
        CHECK(std::abs(settled.r_mod - sol->J_mod) < 1e-3);
    }
}

TEST_SUITE_END();
