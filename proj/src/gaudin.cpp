#include "kuramoto/gaudin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "kuramoto/errors.hpp"
#include "kuramoto/util.hpp"

namespace kuramoto {

PseudoSpinConfig::PseudoSpinConfig(std::vector<Vec3> t) : taus(std::move(t)) {
    if (taus.empty()) throw DimensionMismatch("PseudoSpinConfig: empty configuration");
    for (std::size_t j = 0; j < taus.size(); ++j)
        if (std::abs(norm(taus[j]) - 0.5) > 1e-12)
            throw NonUnimodularInput("PseudoSpinConfig: |t_" + std::to_string(j) + "| != 1/2");
}

PseudoSpinConfig PseudoSpinConfig::aligned_x(std::size_t n) {
    return PseudoSpinConfig(std::vector<Vec3>(n, Vec3{0.5, 0.0, 0.0}));
}

PseudoSpinConfig PseudoSpinConfig::from_angles(const std::vector<double>& polar,
                                               const std::vector<double>& azimuth) {
    if (polar.size() != azimuth.size())
        throw DimensionMismatch("PseudoSpinConfig: polar/azimuth length mismatch");
    std::vector<Vec3> t(polar.size());
    for (std::size_t j = 0; j < polar.size(); ++j)
        t[j] = Vec3{0.5 * std::sin(polar[j]) * std::cos(azimuth[j]),
                    0.5 * std::sin(polar[j]) * std::sin(azimuth[j]), 0.5 * std::cos(polar[j])};
    return PseudoSpinConfig(std::move(t));
}

double PseudoSpinConfig::max_length_deviation() const {
    double worst = 0.0;
    for (const auto& t : taus) worst = std::max(worst, std::abs(norm(t) - 0.5));
    return worst;
}

RichardsonParams::RichardsonParams(std::vector<double> eps, double g_)
    : epsilons(std::move(eps)), g(g_) {
    if (epsilons.empty()) throw DimensionMismatch("RichardsonParams: empty spectrum");
    double sum = 0.0;
    for (double e : epsilons) sum += e;
    if (std::abs(sum) > 1e-12) throw Error("RichardsonParams: spectrum is not centered");
    if (!std::isfinite(g)) throw Error("RichardsonParams: non-finite coupling");
}

RichardsonParams richardson_map(const ModelParams& params) {
    const double Omega = params.freqs.mean();
    std::vector<double> eps(params.n());
    for (std::size_t j = 0; j < params.n(); ++j) eps[j] = params.freqs.omega(j) - Omega;
    // Remove the rounding residue so the centering invariant holds exactly.
    const double residue = mean_of(eps);
    for (double& e : eps) e -= residue;
    return RichardsonParams(std::move(eps), params.lambda / static_cast<double>(params.n()));
}

namespace {

Vec3 planar_sum(const PseudoSpinConfig& config) {
    Vec3 jm{};
    for (const auto& t : config.taus) jm += Vec3{t.x, t.y, 0.0};
    return jm;
}

}  // namespace

double gaudin_h1(const RichardsonParams& rp, const PseudoSpinConfig& config) {
    if (config.size() != rp.epsilons.size()) throw DimensionMismatch("gaudin_h1: config size mismatch");
    double tilt = 0.0;
    for (std::size_t j = 0; j < config.size(); ++j) tilt += 2.0 * rp.epsilons[j] * config.taus[j].z;
    const Vec3 jm = planar_sum(config);
    return tilt - rp.g * dot(jm, jm);
}

std::vector<Vec3> gaudin_h1_gradient(const RichardsonParams& rp, const PseudoSpinConfig& config) {
    if (config.size() != rp.epsilons.size())
        throw DimensionMismatch("gaudin_h1_gradient: config size mismatch");
    const Vec3 jm = planar_sum(config);
    std::vector<Vec3> grad(config.size());
    for (std::size_t j = 0; j < config.size(); ++j)
        grad[j] = Vec3{-2.0 * rp.g * jm.x, -2.0 * rp.g * jm.y, 2.0 * rp.epsilons[j]};
    return grad;
}

double pauli_structure_check() {
    using Mat = std::array<std::array<Complex, 2>, 2>;
    const Complex i{0.0, 1.0};
    const Mat identity{{{1.0, 0.0}, {0.0, 1.0}}};
    // Halved Pauli matrices sigma_alpha.
    const std::array<Mat, 3> sigma{
        Mat{{{0.0, 0.5}, {0.5, 0.0}}},
        Mat{{{0.0, -0.5 * i}, {0.5 * i, 0.0}}},
        Mat{{{0.5, 0.0}, {0.0, -0.5}}},
    };
    const auto mul = [](const Mat& a, const Mat& b) {
        Mat c{};
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) c[r][s] = a[r][0] * b[0][s] + a[r][1] * b[1][s];
        return c;
    };
    const auto levi_civita = [](int a, int b, int c) -> double {
        if (a == b || b == c || a == c) return 0.0;
        return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
    };
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const Mat prod = mul(sigma[a], sigma[b]);
            const Mat prod_ba = mul(sigma[b], sigma[a]);
            for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s) {
                    // sigma_a sigma_b = (1/4) delta_ab I + (i/2) eps_abc sigma_c
                    Complex expected = (a == b ? 0.25 : 0.0) * identity[r][s];
                    Complex comm_expected{0.0, 0.0};
                    for (int c = 0; c < 3; ++c) {
                        expected += 0.5 * i * levi_civita(a, b, c) * sigma[c][r][s];
                        comm_expected += i * levi_civita(a, b, c) * sigma[c][r][s];
                    }
                    worst = std::max(worst, std::abs(prod[r][s] - expected));
                    // [sigma_a, sigma_b] = i eps_abc sigma_c
                    worst = std::max(worst, std::abs(prod[r][s] - prod_ba[r][s] - comm_expected));
                }
        }
    return worst;
}

double heisenberg_perturbation(const ModelParams& params, const SyncSolution& base,
                               const std::vector<double>& sigmas) {
    if (sigmas.size() != base.phis.size())
        throw DimensionMismatch("heisenberg_perturbation: sigmas size != base size");
    if (base.phis.size() != params.n())
        throw DimensionMismatch("heisenberg_perturbation: base size != N");
    const Vec3 J{base.J_mod, 0.0, 0.0};  // base frame: mean field along e1
    double h = 0.0;
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
        const Vec3 s0{std::cos(base.phis[j]), std::sin(base.phis[j]), 0.0};
        const Vec3 sigma = sigmas[j] * cross(s0, e3);
        const Vec3 dual = cross(e3, sigma);
        h += dot(J, dual);
    }
    return -params.lambda * h;
}

MinimizeResult minimize_h1(const RichardsonParams& rp, std::uint64_t seed, std::size_t restarts,
                           std::size_t steps) {
    if (restarts < 1 || steps < 1) throw Error("minimize_h1: restarts and steps must be >= 1");
    const std::size_t n = rp.epsilons.size();

    const auto project = [](Vec3 v) {
        const double len = norm(v);
        return len > 0.0 ? (0.5 / len) * v : Vec3{0.5, 0.0, 0.0};
    };

    struct Candidate {
        std::vector<Vec3> taus;
        double value = std::numeric_limits<double>::infinity();
    };
    std::vector<Candidate> found(restarts);

    parallel_for(restarts, [&](std::size_t r) {
        auto rng = make_rng(seed, r);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<Vec3> taus(n);
        for (auto& t : taus) t = project(Vec3{gauss(rng), gauss(rng), gauss(rng)});

        const auto energy_of = [&](const std::vector<Vec3>& ts) {
            return gaudin_h1(rp, PseudoSpinConfig(ts));
        };
        double value = energy_of(taus);
        double step_size = 0.25 / std::max(1.0, std::abs(rp.g) * static_cast<double>(n));
        std::vector<Vec3> trial(n);
        for (std::size_t it = 0; it < steps; ++it) {
            const auto grad = gaudin_h1_gradient(rp, PseudoSpinConfig(taus));
            for (std::size_t j = 0; j < n; ++j) trial[j] = project(taus[j] - step_size * grad[j]);
            const double trial_value = energy_of(trial);
            if (trial_value <= value) {
                taus.swap(trial);
                value = trial_value;
                step_size *= 1.2;
            } else {
                step_size *= 0.5;
            }
        }
        found[r] = Candidate{std::move(taus), value};
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r)
        if (found[r].value < found[best].value) best = r;
    return {PseudoSpinConfig(std::move(found[best].taus)), found[best].value};
}

}  // namespace kuramoto
