#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "kuramoto/core.hpp"
#include "kuramoto/dynamics.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/util.hpp"
#include "kuramoto/variational.hpp"

using namespace kuramoto;

namespace {

double sum_omegas(const ModelParams& params) {
    const auto& w = params.freqs.omegas();
    return std::accumulate(w.begin(), w.end(), 0.0);
}

}  // namespace

TEST_SUITE_BEGIN("variational");

TEST_CASE("lagrangian fixed values") {
    const ModelParams params(FrequencySpec({0.3, -0.7, 1.2}), 1.5);
    const std::vector<Vec3> rest(3, Vec3{0.0, 0.0, 0.0});
    {
        // all spins at the pole: kinetic and coupling terms vanish
        const std::vector<Vec3> poles(3, e3);
        CHECK(lagrangian(params, poles, rest) == doctest::Approx(-sum_omegas(params)).epsilon(1e-14));
    }
    {
        // static planar configuration at zero coupling
        const ModelParams free_params(FrequencySpec({0.3, -0.7, 1.2}), 0.0);
        const auto spins = SpinConfiguration::from_angles({0.4, 1.9, -2.2}).spins;
        CHECK(lagrangian(free_params, spins, rest) ==
              doctest::Approx(-sum_omegas(params)).epsilon(1e-14));
    }
    {
        // the rate dependence is linear: L(2v) - L(v) = L(v) - L(0)
        auto rng = make_rng(61);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<Vec3> spins(3);
        std::vector<Vec3> rates(3);
        std::vector<Vec3> doubled(3);
        for (int j = 0; j < 3; ++j) {
            spins[j] = normalized(Vec3{gauss(rng), gauss(rng), gauss(rng)});
            rates[j] = Vec3{gauss(rng), gauss(rng), gauss(rng)};
            doubled[j] = 2.0 * rates[j];
        }
        const double l0 = lagrangian(params, spins, rest);
        const double l1 = lagrangian(params, spins, rates);
        const double l2 = lagrangian(params, spins, doubled);
        CHECK(std::abs((l2 - l1) - (l1 - l0)) < 1e-12);
    }
    CHECK_THROWS_AS((void)lagrangian(params, std::vector<Vec3>(2, e3), rest), DimensionMismatch);
}

TEST_CASE("stationarity residual vanishes along planar spin solutions") {
    const ModelParams params(FrequencySpec({0.6, -0.2, -0.9, 0.5}), 1.3);
    IntegratorConfig cfg;
    cfg.t_end = 30.0;
    cfg.sample_dt = 1.0;
    cfg.rtol = 1e-11;
    cfg.atol = 1e-13;
    const auto traj =
        integrate(params, SpinConfiguration::from_angles({0.0, 1.2, 2.9, -1.4}), cfg);
    double worst = 0.0;
    for (const auto& state : traj.states)
        for (const auto& r : euler_lagrange_residual(params, state)) worst = std::max(worst, norm(r));
    CHECK(worst < 1e-7);

    // tilting one spin out of the plane breaks stationarity measurably
    auto corrupted = traj.states.back();
    corrupted.spins[0].z += 0.05;
    double broken = 0.0;
    for (const auto& r : euler_lagrange_residual(params, corrupted)) broken = std::max(broken, norm(r));
    CHECK(broken > 1e-3);
}

TEST_CASE("stationarity residual at an aligned equilibrium") {
    // identical zero frequencies, aligned planar spins, zero rates
    const ModelParams params(FrequencySpec({0.0, 0.0, 0.0}), 2.0);
    const auto spins = SpinConfiguration::from_angles({0.7, 0.7, 0.7}).spins;
    const std::vector<Vec3> rest(3, Vec3{0.0, 0.0, 0.0});
    for (const auto& r : euler_lagrange_residual(params, spins, rest)) CHECK(norm(r) < 1e-15);
}

TEST_CASE("hamiltonian fixed values") {
    {
        const ModelParams params(FrequencySpec({0.4}), 0.8);
        const auto point = PhaseSpacePoint::planar(PhaseState({2.1}));
        CHECK(hamiltonian(params, point) == doctest::Approx(-0.4).epsilon(1e-14));
    }
    {
        const ModelParams params(FrequencySpec({0.3, -0.7, 1.2, 0.1}), 1.5);
        const auto point = PhaseSpacePoint::planar(PhaseState({0.4, 1.9, -2.2, 3.0}));
        CHECK(hamiltonian(params, point) == doctest::Approx(-sum_omegas(params)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(PhaseSpacePoint({e3, e3}, {e3}), DimensionMismatch);
}

TEST_CASE("canonical rates against finite differences") {
    const ModelParams params(FrequencySpec({0.5, -0.3, 0.8}), 1.1);
    auto rng = make_rng(67);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec3> spins(3);
    std::vector<Vec3> momenta(3);
    for (int j = 0; j < 3; ++j) {
        spins[j] = Vec3{gauss(rng), gauss(rng), gauss(rng)};
        momenta[j] = Vec3{gauss(rng), gauss(rng), gauss(rng)};
    }
    const PhaseSpacePoint point(spins, momenta);
    const auto [dS, dP] = hamilton_rhs(params, point);

    const auto probe = [&](bool in_spins, int j, int axis, double step) {
        PhaseSpacePoint p = point;
        auto& target = in_spins ? p.spins[j] : p.momenta[j];
        (axis == 0 ? target.x : axis == 1 ? target.y : target.z) += step;
        return hamiltonian(params, p);
    };
    const double h = 1e-5;
    for (int j = 0; j < 3; ++j)
        for (int axis = 0; axis < 3; ++axis) {
            // Richardson-refined central differences of H
            const auto refined = [&](bool in_spins) {
                const double d1 =
                    (probe(in_spins, j, axis, h) - probe(in_spins, j, axis, -h)) / (2.0 * h);
                const double d2 =
                    (probe(in_spins, j, axis, 0.5 * h) - probe(in_spins, j, axis, -0.5 * h)) / h;
                return (4.0 * d2 - d1) / 3.0;
            };
            const Vec3 grad_p = dS[j];         // dH/dP_j drives the spin rate
            const Vec3 grad_s = -1.0 * dP[j];  // dH/dS_j drives the momentum rate
            const double as = axis == 0 ? grad_s.x : axis == 1 ? grad_s.y : grad_s.z;
            const double ap = axis == 0 ? grad_p.x : axis == 1 ? grad_p.y : grad_p.z;
            CHECK(std::abs(refined(true) - as) < 1e-6);
            CHECK(std::abs(refined(false) - ap) < 1e-6);
        }

    // truncation decays at second order along a direction mixing all
    // coordinates (single-axis probes see only quadratic dependence, so they
    // cannot witness the order)
    std::vector<Vec3> dir_s(3);
    std::vector<Vec3> dir_p(3);
    for (int j = 0; j < 3; ++j) {
        dir_s[j] = Vec3{gauss(rng), gauss(rng), gauss(rng)};
        dir_p[j] = Vec3{gauss(rng), gauss(rng), gauss(rng)};
    }
    double analytic = 0.0;
    for (int j = 0; j < 3; ++j)
        analytic += dot(-1.0 * dP[j], dir_s[j]) + dot(dS[j], dir_p[j]);
    const auto dir_error = [&](double step) {
        PhaseSpacePoint plus = point;
        PhaseSpacePoint minus = point;
        for (int j = 0; j < 3; ++j) {
            plus.spins[j] += step * dir_s[j];
            plus.momenta[j] += step * dir_p[j];
            minus.spins[j] += -step * dir_s[j];
            minus.momenta[j] += -step * dir_p[j];
        }
        return std::abs((hamiltonian(params, plus) - hamiltonian(params, minus)) / (2.0 * step) -
                        analytic);
    };
    const double order = std::log2(dir_error(1e-2) / dir_error(5e-3));
    CHECK(order > 1.7);
    CHECK(order < 2.3);
}

TEST_CASE("canonical flow restricted to planar points") {
    const ModelParams params(FrequencySpec({0.5, -0.5, 0.2}), 1.4);
    const PhaseState init({0.3, 2.0, -1.1});
    {
        // the S-equation reproduces the spin flow on planar points
        const auto point = PhaseSpacePoint::planar(init);
        const auto [dS, dP] = hamilton_rhs(params, point);
        const auto flow = spin_rhs(params, SpinConfiguration::from_angles(init.thetas));
        for (std::size_t j = 0; j < 3; ++j) CHECK(norm(dS[j] - flow[j]) < 1e-10);
    }
    {
        // Energy constant along the canonical flow started on the plane.  The planar
        // set is exactly invariant but radially unstable in the ambient flow: rounding
        // noise in the norms amplifies exponentially and the cubic flow escapes in
        // finite time (around t = 24 here), so the horizon must stay well short of that.
        IntegratorConfig cfg;
        cfg.t_end = 15.0;
        cfg.sample_dt = 1.0;
        cfg.rtol = 1e-11;
        cfg.atol = 1e-13;
        const auto traj = integrate_hamilton(params, PhaseSpacePoint::planar(init), cfg);
        const double e0 = -sum_omegas(params);
        double worst_energy = 0.0;
        double worst_plane = 0.0;
        for (const auto& pt : traj.states) {
            worst_energy = std::max(worst_energy, std::abs(hamiltonian(params, pt) - e0));
            for (const auto& s : pt.spins) worst_plane = std::max(worst_plane, std::abs(s.z));
        }
        CHECK(worst_energy < 1e-8);
        CHECK(worst_plane < 1e-8);
    }
}

TEST_CASE("angular accelerations are the flow derivative of the rates") {
    const ModelParams params(FrequencySpec({0.9, -0.4, 0.1, 0.6}), 1.2);
    const PhaseState state({0.0, 1.7, -2.5, 0.9});
    const auto accel = phase_acceleration(params, state);
    const auto rates = kuramoto_rhs(params, state);
    const double h = 1e-6;
    PhaseState plus = state;
    PhaseState minus = state;
    for (std::size_t j = 0; j < 4; ++j) {
        plus.thetas[j] += h * rates[j];
        minus.thetas[j] -= h * rates[j];
    }
    const auto rp = kuramoto_rhs(params, plus);
    const auto rm = kuramoto_rhs(params, minus);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(std::abs((rp[j] - rm[j]) / (2.0 * h) - accel[j]) < 1e-6);
}

TEST_CASE("mixed-partial asymmetry expressions") {
    {
        // quarter-turn separation zeroes the closed form through its prefactor
        const ModelParams params(FrequencySpec({0.5, -0.5}), 2.0);
        CHECK(curl_mismatch_closed_form(params, PhaseState({0.0, pi / 2.0}), 0, 1) ==
              doctest::Approx(0.0));
    }
    {
        // coincident phases zero the bracketed sum
        const ModelParams params(FrequencySpec({0.5, -0.5, 0.1}), 2.0);
        CHECK(curl_mismatch_closed_form(params, PhaseState({1.1, 1.1, 1.1}), 0, 1) ==
              doctest::Approx(0.0));
    }
    {
        // reference configuration: value -1/36 for the first and second
        // oscillators at unit coupling
        const ModelParams params(FrequencySpec({0.3, -0.1, 0.9}), 1.0);
        const PhaseState state({0.0, pi / 3.0, pi});
        CHECK(std::abs(curl_mismatch_closed_form(params, state, 0, 1) - (-1.0 / 36.0)) < 1e-9);
        // the measured asymmetry of the acceleration field vanishes there:
        // the field is a gradient, so the closed form above is not a curl
        CHECK(std::abs(curl_mismatch_numeric(params, state, 0, 1)) < 1e-6);
        CHECK_THROWS_AS((void)curl_mismatch_closed_form(params, state, 1, 1), SameIndex);
        CHECK_THROWS_AS((void)curl_mismatch_numeric(params, state, 0, 1, 1e-8), Error);
        CHECK_THROWS_AS((void)curl_mismatch_numeric(params, state, 0, 1, 1e-2), Error);
    }
    {
        // the numeric asymmetry vanishes on random configurations as well
        auto rng = make_rng(71);
        const ModelParams params(FrequencySpec(sample_uniform(rng, 5, -1.0, 1.0)), 1.7);
        for (int rep = 0; rep < 20; ++rep) {
            const PhaseState state(sample_angles(rng, 5));
            CHECK(std::abs(curl_mismatch_numeric(params, state, 1, 3)) < 1e-6);
        }
    }
}

TEST_SUITE_END();
