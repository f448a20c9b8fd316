#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/types.hpp"

namespace kuramoto {

/// Necessary-condition coupling bounds. Below lambda_c no pair can lock;
/// above lambda_s locking is possible for every pair. These are bounds, not
/// sharp thresholds.
struct CouplingBounds {
    double lambda_c = 0.0;
    double lambda_s = 0.0;
};

/// lambda_c = N/(2(N-1)) min_{j!=l} |omega_j - omega_l|, lambda_s likewise
/// with max. All-equal frequencies give (0, 0). Requires N >= 2.
[[nodiscard]] CouplingBounds coupling_bounds(const FrequencySpec& freqs);

/// Pairs (j, k), j < k, whose phase difference varies by less than tol over
/// the trailing `window` of time. Throws InsufficientData if the trajectory
/// does not cover the window with at least two samples.
[[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> detect_locking(
    const Trajectory<PhaseState>& traj, double window, double tol);

/// Locked-pair identity residual [z_j - z_k, r] - (omega_j - omega_k)/lambda;
/// vanishes on phase-locked pairs. Throws ZeroCoupling when lambda <= 0.
[[nodiscard]] double pair_lock_residual(const std::vector<Complex>& z, Complex r, std::size_t j,
                                        std::size_t k, const ModelParams& params);

/// Cyclic three-oscillator residual
/// (w_k - w_l) sin phi_j + (w_l - w_j) sin phi_k + (w_j - w_k) sin phi_l;
/// identically zero on the family sin phi_j = alpha (omega_j - beta).
[[nodiscard]] double triple_lock_residual(const std::array<double, 3>& phis,
                                          const std::array<double, 3>& omegas);

/// One synchronization branch: |J|, the sign sector of cos phi_j, and the
/// relative phases phi_j (measured from the mean-field direction).
struct SyncSolution {
    double J_mod = 0.0;
    std::vector<int> epsilons;
    std::vector<double> phis;

    /// Angular state realizing the solution with the mean field at theta0.
    [[nodiscard]] PhaseState phase_state(double theta0 = 0.0) const;
};

/// Solve |J| = (1/N) sum_j eps_j sqrt(1 - (omega_j - Omega)^2 / (lambda|J|)^2)
/// for |J| in (0, 1], by damped fixed-point iteration (damping 0.5, initial
/// guess (N+ - N-)/N) with a bisection fallback on F(J) = J - RHS(J); the
/// largest root (stable branch) is returned. std::nullopt when the sector has
/// no solution at this lambda. Throws ZeroCoupling when lambda <= 0.
[[nodiscard]] std::optional<SyncSolution> solve_self_consistent_J(const FrequencySpec& freqs,
                                                                  double lambda,
                                                                  const std::vector<int>& epsilons);

/// Two-term large-lambda expansion
/// |J| ~ |J|0 - E[eps_j (omega_j - Omega)^2] / (2 lambda^2 |J|0^2),
/// |J|0 = (N+ - N-)/N. Valid when N max|omega_j - Omega| << lambda (N+ - N-);
/// the caller checks the regime.
[[nodiscard]] double asymptotic_J(const FrequencySpec& freqs, double lambda,
                                  const std::vector<int>& epsilons);

/// Equilibrium identity residual lambda|J| - sum(omega_j - Omega) sin phi_j /
/// sum sin^2 phi_j, with phi_j measured from the state's own mean field.
/// Throws DegenerateDenominator when sum sin^2 phi_j < 1e-14 (aligned state).
[[nodiscard]] double global_sync_residual(const PhaseState& state, const ModelParams& params);
[[nodiscard]] double global_sync_residual(const SpinConfiguration& state, const ModelParams& params);

struct ClassifyThresholds {
    double constancy = 1e-5;        ///< max-min of |r| below this counts as constant
    double edge = 1e-3;             ///< distance from 0 or 1 that still counts as 0 or 1
    double incoherent_mean = 0.2;   ///< fluctuating series with mean below this is unsynchronized
};

/// Classify a trailing window of |r| samples. Constant near 0 or fluctuating
/// about small values -> unsynchronized; constant near 1 -> fully
/// synchronized; constant in between -> partially synchronized; anything else
/// -> nonstationary. Throws InsufficientData for windows of fewer than two
/// samples.
[[nodiscard]] SyncClass classify(std::span<const double> r_window, ClassifyThresholds thr = {});

/// Integrate in chunks until the windowed frequency-lock criterion holds or
/// t_max elapses. Returns the final state and whether convergence was seen.
/// `proto` supplies the stepping scheme (method, dt, tolerances); chunking
/// and sampling are managed internally.
struct SteadyStateResult {
    PhaseState state;
    bool converged = false;
    double t_reached = 0.0;
    double r_mod = 0.0;  ///< trailing-window mean of |r|
};
[[nodiscard]] SteadyStateResult settle(const ModelParams& params, const PhaseState& init,
                                       double t_max, double rate_tol = 1e-8,
                                       const IntegratorConfig& proto = {});

}  // namespace kuramoto
