#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kuramoto/analysis.hpp"
#include "kuramoto/dynamics.hpp"
#include "kuramoto/types.hpp"

namespace kuramoto {

/// Classical pseudospin configuration: N vectors of length 1/2.
struct PseudoSpinConfig {
    std::vector<Vec3> taus;

    PseudoSpinConfig() = default;
    /// Throws NonUnimodularInput unless every |t_j| = 1/2 within 1e-12.
    explicit PseudoSpinConfig(std::vector<Vec3> t);

    /// All spins at (1/2, 0, 0).
    static PseudoSpinConfig aligned_x(std::size_t n);

    /// Spherical angles (polar from the 3-axis, azimuth beta).
    static PseudoSpinConfig from_angles(const std::vector<double>& polar,
                                        const std::vector<double>& azimuth);

    [[nodiscard]] std::size_t size() const { return taus.size(); }
    [[nodiscard]] double max_length_deviation() const;
};

/// Centered spectrum epsilon_j = omega_j - Omega and coupling g = lambda / N.
struct RichardsonParams {
    std::vector<double> epsilons;
    double g = 0.0;

    RichardsonParams() = default;
    /// Throws Error unless sum epsilon_j = 0 within 1e-12.
    RichardsonParams(std::vector<double> eps, double g_);
};

/// Map model frequencies and coupling to (epsilon_j, g); the computed mean is
/// subtracted so the spectrum is centered to rounding.
[[nodiscard]] RichardsonParams richardson_map(const ModelParams& params);

/// H1 = sum_j 2 epsilon_j t3_j - g |Jm|^2 with Jm = sum_j (t1_j, t2_j, 0).
[[nodiscard]] double gaudin_h1(const RichardsonParams& rp, const PseudoSpinConfig& config);

/// Ambient-coordinate gradient dH1/dt_j = (-2 g Jm1, -2 g Jm2, 2 epsilon_j).
[[nodiscard]] std::vector<Vec3> gaudin_h1_gradient(const RichardsonParams& rp,
                                                   const PseudoSpinConfig& config);

/// Worst-case violation of the halved-Pauli identities
/// sigma_a sigma_b = (1/4) delta_ab I + (i/2) eps_abc sigma_c and
/// [sigma_a, sigma_b] = i eps_abc sigma_c over all index pairs, computed with
/// explicit 2x2 complex matrices.
[[nodiscard]] double pauli_structure_check();

/// Perturbation energy h = -lambda sum_j J . sigma*_j around a
/// synchronization state: sigma_j = |sigma_j| S0_j x e3 with S0_j the base
/// state's planar spin direction, sigma*_j = e3 x sigma_j its dual, and J the
/// base state's mean field. `sigmas` holds the signed magnitudes |sigma_j|.
[[nodiscard]] double heisenberg_perturbation(const ModelParams& params, const SyncSolution& base,
                                             const std::vector<double>& sigmas);

/// Result of a gradient search for the minimum of H1 on the product of
/// radius-1/2 spheres.
struct MinimizeResult {
    PseudoSpinConfig config;
    double value = 0.0;
};

/// Projected gradient descent with seeded random restarts (run concurrently,
/// reduced deterministically by energy then restart index).
[[nodiscard]] MinimizeResult minimize_h1(const RichardsonParams& rp, std::uint64_t seed,
                                         std::size_t restarts = 32, std::size_t steps = 1000);

}  // namespace kuramoto
