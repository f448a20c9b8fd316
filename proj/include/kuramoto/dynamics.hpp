#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kuramoto/core.hpp"
#include "kuramoto/types.hpp"

namespace kuramoto {

/// Mean-field model parameters: frequencies plus coupling lambda >= 0.
struct ModelParams {
    FrequencySpec freqs;
    double lambda = 0.0;

    ModelParams(FrequencySpec f, double lam);

    [[nodiscard]] std::size_t n() const { return freqs.size(); }
};

enum class Method {
    fixed_rk4,      ///< classic RK4 at constant dt (byte-reproducible runs)
    adaptive_rk45,  ///< embedded Dormand-Prince 5(4) with step control
};

struct IntegratorConfig {
    Method method = Method::adaptive_rk45;
    double dt = 1e-2;        ///< fixed step, or initial trial step when adaptive
    double t_end = 100.0;
    double rtol = 1e-9;      ///< relative tolerance, adaptive method only
    double atol = 1e-12;
    double dt_min = 1e-12;   ///< adaptive step underflow threshold -> StepFailure
    double sample_dt = 0.0;  ///< 0 records every accepted step
    bool renormalize = false;  ///< project spins back to unit norm after each step

    void validate() const;  ///< throws Error on out-of-range fields
};

/// Angular rates theta'_j = omega_j + (lambda/N) sum_k sin(theta_k - theta_j).
[[nodiscard]] std::vector<double> kuramoto_rhs(const ModelParams& params, const PhaseState& state);

/// Complex form z'_j = i z_j (omega_j + lambda [r, z_j]); requires |z_j| = 1
/// within 1e-9 (NonUnimodularInput otherwise).
[[nodiscard]] std::vector<Complex> kuramoto_rhs_complex(const ModelParams& params,
                                                        const std::vector<Complex>& z);

/// Spin rates S'_j = omega_j e3 x S_j + lambda S_j x (J x S_j); each output is
/// orthogonal to its spin, so norms are conserved by the flow.
[[nodiscard]] std::vector<Vec3> spin_rhs(const ModelParams& params, const SpinConfiguration& state);

template <class State>
using Observer = std::function<double(double t, const State& state)>;
template <class State>
using ObserverMap = std::map<std::string, Observer<State>>;

/// Integrate the angular system (Eq. of motion above).
[[nodiscard]] Trajectory<PhaseState> integrate(const ModelParams& params, const PhaseState& init,
                                               const IntegratorConfig& cfg,
                                               const ObserverMap<PhaseState>& observers = {});

/// Integrate the spin system. renormalize=true projects spins to unit norm
/// after each accepted step; off by default so norm drift stays measurable.
[[nodiscard]] Trajectory<SpinConfiguration> integrate(const ModelParams& params,
                                                      const SpinConfiguration& init,
                                                      const IntegratorConfig& cfg,
                                                      const ObserverMap<SpinConfiguration>& observers = {});

/// Integrate the complex form (kept for representation cross-checks).
[[nodiscard]] Trajectory<std::vector<Complex>> integrate_complex(const ModelParams& params,
                                                                 const std::vector<Complex>& init,
                                                                 const IntegratorConfig& cfg);

/// Windowed frequency-lock test: max_j |theta'_j - mean(theta')| < tol at each
/// of the last `window` samples. The equations define locking as exact rate
/// equality; finite runs need this numerical stand-in.
[[nodiscard]] bool frequencies_locked(const ModelParams& params, const Trajectory<PhaseState>& traj,
                                      std::size_t window = 10, double tol = 1e-8);

/// Generic driver shared by all state representations and by other modules
/// (kink flows, Hamiltonian flow). y is advanced in place; on_sample is called
/// at t0, at each sampling time, and at t_end.
void integrate_ode(const std::function<void(double, const std::vector<double>&, std::vector<double>&)>& rhs,
                   std::vector<double>& y, const IntegratorConfig& cfg,
                   const std::function<void(double, const std::vector<double>&)>& on_sample,
                   const std::function<void(std::vector<double>&)>& post_step = {});

}  // namespace kuramoto
