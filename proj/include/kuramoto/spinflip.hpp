#pragma once

#include <array>
#include <cstddef>
#include <functional>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/types.hpp"

namespace kuramoto {

/// Single tagged oscillator riding on a synchronized background of strength
/// J rotating at Omega: phi' = omega - Omega - lambda J sin(phi).
struct KinkParams {
    double omega = 0.0;   ///< natural frequency of the tagged oscillator
    double Omega = 0.0;   ///< rotation rate of the background frame
    double lambda = 1.0;  ///< coupling
    double J = 1.0;       ///< background order-parameter modulus

    KinkParams() = default;
    KinkParams(double omega_, double Omega_, double lambda_, double J_);

    /// Detuning m = omega - Omega seen in the rotating frame.
    [[nodiscard]] double detuning() const { return omega - Omega; }

    /// True when |m| < lambda J, i.e. the sine flow has fixed points.
    [[nodiscard]] bool trapped() const;
};

/// phi' = omega - Omega - lambda J sin(phi).
[[nodiscard]] double kink_rhs(const KinkParams& params, double phi);

/// Relaxation rate Lambda = sqrt((lambda J)^2 - (omega - Omega)^2) of
/// deviations from the stable phase. Throws ImaginaryRate when the detuning
/// exceeds lambda J (no locked state exists there).
[[nodiscard]] double relaxation_rate(const KinkParams& params);

/// Stable fixed point phi* = asin(m / (lambda J)) on the cos > 0 branch,
/// and the unstable companion pi - phi*.
[[nodiscard]] double stable_phase(const KinkParams& params);
[[nodiscard]] double unstable_phase(const KinkParams& params);

/// Exact kink profile of the deviation delta = phi - phi_unstable' reference:
/// delta(t) = 2 atan( tan(delta0/2) exp(-Lambda t) ),
/// the solution of delta' = -Lambda sin(delta), delta(0) = delta0,
/// for |delta0| < pi. The deviation decays onto the stable phase.
[[nodiscard]] double kink_analytic(const KinkParams& params, double delta0, double t);

/// Integrate phi' = kink_rhs from phi0; observables record phi(t).
[[nodiscard]] Trajectory<double> integrate_kink(const KinkParams& params, double phi0,
                                                const IntegratorConfig& cfg);

/// Least-squares exponential rate of |phi(t) - phi*| from trajectory tail
/// samples with log-linear fit; compares against relaxation_rate.
[[nodiscard]] double fitted_relaxation_rate(const KinkParams& params, const Trajectory<double>& traj);

/// Two tagged oscillators on a partially self-consistent background:
/// phi'_a = omega_a - Omega - lambda J sin(phi_a) - (lambda/N) sin(phi_a - phi_b).
/// J carries the background share; with_background rescales a full-population
/// order parameter by (N-2)/N so the pair's own contribution enters only
/// through the explicit pair term.
struct TwoSpinParams {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double Omega = 0.0;
    double lambda = 1.0;
    double J = 1.0;          ///< background modulus excluding the tagged pair
    std::size_t N = 3;       ///< total population size (>= 3)

    TwoSpinParams() = default;
    TwoSpinParams(double omega1_, double omega2_, double Omega_, double lambda_, double J_,
                  std::size_t N_);

    /// Rescale a full-population J_full by (N-2)/N.
    [[nodiscard]] TwoSpinParams with_background(double J_full) const;

    [[nodiscard]] double mean_detuning() const { return 0.5 * (omega1 + omega2) - Omega; }
    [[nodiscard]] double half_splitting() const { return 0.5 * (omega1 - omega2); }
};

/// Right-hand side (phi'_1, phi'_2).
[[nodiscard]] std::array<double, 2> two_spin_rhs(const TwoSpinParams& params,
                                                 const std::array<double, 2>& phis);

/// Strong-coupling stationary points of the pair in sum/difference variables
/// sigma = (phi_1 + phi_2)/2, delta = (phi_1 - phi_2)/2:
/// sigma ~ m / (lambda J), delta ~ d / sqrt((lambda J)^2 - m^2), with
/// m the mean detuning and d the half splitting.
struct TwoSpinAsymptotic {
    double sigma;
    double delta;
};
[[nodiscard]] TwoSpinAsymptotic two_spin_asymptotic(const TwoSpinParams& params);

/// Integrate the pair flow; observables record phi1, phi2, sigma, delta.
[[nodiscard]] Trajectory<std::array<double, 2>> integrate_two_spin(const TwoSpinParams& params,
                                                                   const std::array<double, 2>& phis0,
                                                                   const IntegratorConfig& cfg);

}  // namespace kuramoto
