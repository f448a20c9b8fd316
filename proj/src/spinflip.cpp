#include "kuramoto/spinflip.hpp"

#include <cmath>

#include "kuramoto/errors.hpp"
#include "kuramoto/util.hpp"

namespace kuramoto {

KinkParams::KinkParams(double omega_, double Omega_, double lambda_, double J_)
    : omega(omega_), Omega(Omega_), lambda(lambda_), J(J_) {
    if (!std::isfinite(omega) || !std::isfinite(Omega) || !std::isfinite(lambda) || !std::isfinite(J))
        throw Error("KinkParams: non-finite parameter");
    if (lambda <= 0.0) throw ZeroCoupling("KinkParams: lambda must be positive");
    if (J < 0.0) throw Error("KinkParams: background modulus must be >= 0");
}

bool KinkParams::trapped() const { return std::abs(detuning()) < lambda * J; }

double kink_rhs(const KinkParams& params, double phi) {
    return params.detuning() - params.lambda * params.J * std::sin(phi);
}

double relaxation_rate(const KinkParams& params) {
    const double lj = params.lambda * params.J;
    const double m = params.detuning();
    const double arg = lj * lj - m * m;
    if (arg < 0.0)
        throw ImaginaryRate("relaxation_rate: |omega - Omega| exceeds lambda J, no locked state");
    return std::sqrt(arg);
}

double stable_phase(const KinkParams& params) {
    const double lj = params.lambda * params.J;
    const double m = params.detuning();
    if (std::abs(m) > lj)
        throw ImaginaryRate("stable_phase: |omega - Omega| exceeds lambda J, no locked state");
    return std::asin(m / lj);
}

double unstable_phase(const KinkParams& params) { return pi - stable_phase(params); }

double kink_analytic(const KinkParams& params, double delta0, double t) {
    if (!(std::abs(delta0) < pi)) throw Error("kink_analytic: |delta0| must be < pi");
    const double rate = relaxation_rate(params);
    return 2.0 * std::atan(std::tan(0.5 * delta0) * std::exp(-rate * t));
}

Trajectory<double> integrate_kink(const KinkParams& params, double phi0, const IntegratorConfig& cfg) {
    std::vector<double> y{phi0};
    Trajectory<double> traj;
    integrate_ode(
        [&params](double, const std::vector<double>& s, std::vector<double>& ds) {
            ds.resize(1);
            ds[0] = kink_rhs(params, s[0]);
        },
        y, cfg,
        [&traj](double t, const std::vector<double>& s) {
            traj.times.push_back(t);
            traj.states.push_back(s[0]);
            traj.observables["phi"].push_back(s[0]);
        });
    traj.validate();
    return traj;
}

double fitted_relaxation_rate(const KinkParams& params, const Trajectory<double>& traj) {
    const double target = stable_phase(params);
    // Log-linear fit on the exponential tail: keep samples close enough to
    // the stable phase for the linearization (|residual| <= 0.1, bias below
    // 0.2%) and far enough above integration error (>= 1e-6).
    std::vector<double> ts;
    std::vector<double> logs;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double residual = std::abs(wrap_angle(traj.states[i] - target));
        if (residual >= 1e-6 && residual <= 0.1) {
            ts.push_back(traj.times[i]);
            logs.push_back(std::log(residual));
        }
    }
    if (ts.size() < 5)
        throw InsufficientData("fitted_relaxation_rate: too few samples in the decay window");
    return -linear_fit(ts, logs).slope;
}

TwoSpinParams::TwoSpinParams(double omega1_, double omega2_, double Omega_, double lambda_,
                             double J_, std::size_t N_)
    : omega1(omega1_), omega2(omega2_), Omega(Omega_), lambda(lambda_), J(J_), N(N_) {
    if (!std::isfinite(omega1) || !std::isfinite(omega2) || !std::isfinite(Omega) ||
        !std::isfinite(lambda) || !std::isfinite(J))
        throw Error("TwoSpinParams: non-finite parameter");
    if (lambda <= 0.0) throw ZeroCoupling("TwoSpinParams: lambda must be positive");
    if (J < 0.0) throw Error("TwoSpinParams: background modulus must be >= 0");
    if (N < 3) throw DimensionMismatch("TwoSpinParams: need N >= 3 (two tagged spins + background)");
}

TwoSpinParams TwoSpinParams::with_background(double J_full) const {
    TwoSpinParams out = *this;
    out.J = J_full * static_cast<double>(N - 2) / static_cast<double>(N);
    return out;
}

std::array<double, 2> two_spin_rhs(const TwoSpinParams& params, const std::array<double, 2>& phis) {
    const double lj = params.lambda * params.J;
    const double pair = params.lambda / static_cast<double>(params.N);
    return {params.omega1 - params.Omega - lj * std::sin(phis[0]) - pair * std::sin(phis[0] - phis[1]),
            params.omega2 - params.Omega - lj * std::sin(phis[1]) - pair * std::sin(phis[1] - phis[0])};
}

TwoSpinAsymptotic two_spin_asymptotic(const TwoSpinParams& params) {
    const double lj = params.lambda * params.J;
    const double m = params.mean_detuning();
    const double d = params.half_splitting();
    const double arg = lj * lj - m * m;
    if (arg <= 0.0)
        throw ImaginaryRate("two_spin_asymptotic: mean detuning exceeds lambda J, no locked pair");
    return {m / lj, d / std::sqrt(arg)};
}

Trajectory<std::array<double, 2>> integrate_two_spin(const TwoSpinParams& params,
                                                     const std::array<double, 2>& phis0,
                                                     const IntegratorConfig& cfg) {
    std::vector<double> y{phis0[0], phis0[1]};
    Trajectory<std::array<double, 2>> traj;
    integrate_ode(
        [&params](double, const std::vector<double>& s, std::vector<double>& ds) {
            const auto rates = two_spin_rhs(params, {s[0], s[1]});
            ds.resize(2);
            ds[0] = rates[0];
            ds[1] = rates[1];
        },
        y, cfg,
        [&traj](double t, const std::vector<double>& s) {
            traj.times.push_back(t);
            traj.states.push_back({s[0], s[1]});
            traj.observables["phi1"].push_back(s[0]);
            traj.observables["phi2"].push_back(s[1]);
            traj.observables["sigma"].push_back(0.5 * (s[0] + s[1]));
            traj.observables["delta"].push_back(0.5 * (s[0] - s[1]));
        });
    traj.validate();
    return traj;
}

}  // namespace kuramoto
