#pragma once

#include <utility>
#include <vector>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/types.hpp"

namespace kuramoto {

/// Point of the 6N-dimensional phase space (S_j, P_j).
struct PhaseSpacePoint {
    std::vector<Vec3> spins;
    std::vector<Vec3> momenta;

    PhaseSpacePoint() = default;
    PhaseSpacePoint(std::vector<Vec3> s, std::vector<Vec3> p);

    /// Planar Kuramoto point: S_j from angles, P_j = S_j x e3.
    static PhaseSpacePoint planar(const PhaseState& state);

    [[nodiscard]] std::size_t size() const { return spins.size(); }
};

/// L = sum_j { e3.(S'_j x S_j) - omega_j |S_j|^2
///             + lambda (e3 x ((J x S_j) x S_j)) . S_j }.
[[nodiscard]] double lagrangian(const ModelParams& params, const std::vector<Vec3>& spins,
                                const std::vector<Vec3>& spin_rates);

/// Residual of the stationarity equations
/// S'_j - P3 S'_j - omega_j e3 x S_j - lambda S_j x (P3 (J x S_j)),
/// where P3 projects onto e3. Zero along planar solutions of the spin flow.
[[nodiscard]] std::vector<Vec3> euler_lagrange_residual(const ModelParams& params,
                                                        const std::vector<Vec3>& spins,
                                                        const std::vector<Vec3>& spin_rates);

/// Convenience overload evaluating the residual at a trajectory sample, with
/// the sample's own flow rates.
[[nodiscard]] std::vector<Vec3> euler_lagrange_residual(const ModelParams& params,
                                                        const SpinConfiguration& state);

/// H = sum_j { -(omega_j/2)(|S_j|^2 + |P_j|^2) + lambda (J x S_j).(P_j x S_j) }.
/// Constant (= -sum omega_j) on planar Kuramoto points.
[[nodiscard]] double hamiltonian(const ModelParams& params, const PhaseSpacePoint& point);

/// Canonical rates (S'_j, P'_j) = (dH/dP_j, -dH/dS_j). The S-gradient
/// differentiates J's dependence on S_j exactly, including the 1/N self-term;
/// on planar points S' reproduces the spin flow and P' its dual.
[[nodiscard]] std::pair<std::vector<Vec3>, std::vector<Vec3>> hamilton_rhs(const ModelParams& params,
                                                                           const PhaseSpacePoint& point);

/// Integrate the canonical flow (exploratory; nothing is asserted off the
/// planar submanifold).
[[nodiscard]] Trajectory<PhaseSpacePoint> integrate_hamilton(const ModelParams& params,
                                                             const PhaseSpacePoint& init,
                                                             const IntegratorConfig& cfg);

/// Angular accelerations theta''_j, the candidate potential gradient of the
/// second-order form of the model:
/// (lambda/N) sum_k cos(D_kj) [omega_k - omega_j
///                             + (lambda/N) sum_l (sin D_lk - sin D_lj)],
/// D_ab = theta_a - theta_b.
[[nodiscard]] std::vector<double> phase_acceleration(const ModelParams& params,
                                                     const PhaseState& state);

/// Closed-form mixed-partial asymmetry expression
/// (lambda/N)^2 cos(D_qj) sum_k [cos(D_kj) - cos(D_kq)].
/// Kept as the reference expression for the certificate output; note that the
/// measured asymmetry of phase_acceleration vanishes identically (the field
/// is a gradient: Phi = (1/2) sum_k theta'_k(theta)^2), so this expression
/// does NOT equal the finite-difference curl. See curl_mismatch_numeric.
[[nodiscard]] double curl_mismatch_closed_form(const ModelParams& params, const PhaseState& state,
                                               std::size_t j, std::size_t q);

/// Honest central-difference asymmetry d_q a_j - d_j a_q of
/// phase_acceleration; zero up to O(h^2) truncation and roundoff for every
/// configuration. h must lie in [1e-6, 1e-3].
[[nodiscard]] double curl_mismatch_numeric(const ModelParams& params, const PhaseState& state,
                                           std::size_t j, std::size_t q, double h = 1e-4);

}  // namespace kuramoto
