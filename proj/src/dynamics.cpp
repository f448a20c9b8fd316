#include "kuramoto/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "kuramoto/errors.hpp"
#include "kuramoto/util.hpp"

namespace kuramoto {

ModelParams::ModelParams(FrequencySpec f, double lam) : freqs(std::move(f)), lambda(lam) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error("ModelParams: coupling must be finite and >= 0");
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw Error("integrator: dt must be positive");
    if (!(t_end > 0.0)) throw Error("integrator: t_end must be positive");
    if (!(rtol > 0.0) || !(atol > 0.0)) throw Error("integrator: tolerances must be positive");
    if (!(dt_min > 0.0)) throw Error("integrator: dt_min must be positive");
    if (sample_dt < 0.0) throw Error("integrator: sample_dt must be >= 0");
}

std::vector<double> kuramoto_rhs(const ModelParams& params, const PhaseState& state) {
    if (state.size() != params.n()) throw DimensionMismatch("kuramoto_rhs: state size != N");
    const auto z = state.unit_complex();
    Complex r{0.0, 0.0};
    for (const auto& zj : z) r += zj;
    r /= static_cast<double>(z.size());
    std::vector<double> rates(z.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        rates[j] = params.freqs.omega(j) + params.lambda * antisym_form(r, z[j]);
    return rates;
}

namespace {

/// Complex rates without the unimodularity gate; shared by the checked entry
/// point and the integrator (whose internal stages drift off the circle by
/// O(step)).
std::vector<Complex> complex_rates(const ModelParams& params, const std::vector<Complex>& z) {
    Complex r{0.0, 0.0};
    for (const auto& zj : z) r += zj;
    r /= static_cast<double>(z.size());
    std::vector<Complex> rates(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        const double phase_rate = params.freqs.omega(j) + params.lambda * antisym_form(r, z[j]);
        rates[j] = Complex(0.0, 1.0) * z[j] * phase_rate;
    }
    return rates;
}

}  // namespace

std::vector<Complex> kuramoto_rhs_complex(const ModelParams& params, const std::vector<Complex>& z) {
    if (z.size() != params.n()) throw DimensionMismatch("kuramoto_rhs_complex: state size != N");
    for (std::size_t j = 0; j < z.size(); ++j)
        if (std::abs(std::abs(z[j]) - 1.0) >= 1e-9)
            throw NonUnimodularInput("kuramoto_rhs_complex: |z_" + std::to_string(j) + "| != 1");
    return complex_rates(params, z);
}

std::vector<Vec3> spin_rhs(const ModelParams& params, const SpinConfiguration& state) {
    if (state.size() != params.n()) throw DimensionMismatch("spin_rhs: state size != N");
    Vec3 J{};
    for (const auto& s : state.spins) J += s;
    J = J / static_cast<double>(state.size());
    std::vector<Vec3> rates(state.size());
    for (std::size_t j = 0; j < state.size(); ++j) {
        const Vec3& s = state.spins[j];
        rates[j] = params.freqs.omega(j) * cross(e3, s) + params.lambda * cross(s, cross(J, s));
    }
    return rates;
}

namespace {

using FlatRhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;
using FlatSample = std::function<void(double, const std::vector<double>&)>;
using FlatPost = std::function<void(std::vector<double>&)>;

/// Next scheduled output time strictly after t (k*sample_dt grid capped at
/// t_end), or t_end when no grid is set.
double next_sample_time(double t, double sample_dt, double t_end) {
    if (sample_dt <= 0.0) return t_end;
    const double k = std::floor(t / sample_dt + 1e-9) + 1.0;
    return std::min(k * sample_dt, t_end);
}

void step_rk4(const FlatRhs& rhs, double t, double h, const std::vector<double>& y,
              std::vector<double>& out, std::vector<std::vector<double>>& work) {
    const std::size_t n = y.size();
    auto& k1 = work[0];
    auto& k2 = work[1];
    auto& k3 = work[2];
    auto& k4 = work[3];
    auto& tmp = work[4];
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3c = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

/// One trial Dormand-Prince step; returns the scaled error norm.
double step_dp45(const FlatRhs& rhs, double t, double h, const std::vector<double>& y,
                 std::vector<double>& out, double rtol, double atol,
                 std::vector<std::vector<double>>& work) {
    const std::size_t n = y.size();
    auto& k1 = work[0];
    auto& k2 = work[1];
    auto& k3 = work[2];
    auto& k4 = work[3];
    auto& k5 = work[4];
    auto& k6 = work[5];
    auto& k7 = work[6];
    auto& tmp = work[7];
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + h / 5.0, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + 3.0 * h / 10.0, tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + 4.0 * h / 5.0, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + 8.0 * h / 9.0, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, tmp, k6);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, out, k7);
    double err_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e =
            h * (e1 * k1[i] + e3c * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(out[i]));
        err_sq += (e / scale) * (e / scale);
    }
    return std::sqrt(err_sq / static_cast<double>(n));
}

}  // namespace

void integrate_ode(const FlatRhs& rhs, std::vector<double>& y, const IntegratorConfig& cfg,
                   const FlatSample& on_sample, const FlatPost& post_step) {
    cfg.validate();
    const std::size_t n = y.size();
    if (n == 0) throw DimensionMismatch("integrate_ode: empty state");
    if (on_sample) on_sample(0.0, y);

    if (cfg.method == Method::fixed_rk4) {
        std::vector<std::vector<double>> work(5, std::vector<double>(n));
        std::vector<double> ynext(n);
        const auto total_steps =
            static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-12));
        const std::size_t stride =
            cfg.sample_dt <= 0.0
                ? 1
                : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.sample_dt / cfg.dt - 1e-12)));
        double t = 0.0;
        for (std::size_t step = 0; step < total_steps; ++step) {
            const double t_next = std::min((static_cast<double>(step) + 1.0) * cfg.dt, cfg.t_end);
            step_rk4(rhs, t, t_next - t, y, ynext, work);
            y = ynext;
            t = t_next;
            if (post_step) post_step(y);
            const bool last = step + 1 == total_steps;
            if (on_sample && (last || (step + 1) % stride == 0)) on_sample(t, y);
        }
        return;
    }

    std::vector<std::vector<double>> work(8, std::vector<double>(n));
    std::vector<double> ynext(n);
    double t = 0.0;
    double h = std::min(cfg.dt, cfg.t_end);
    double boundary = next_sample_time(0.0, cfg.sample_dt, cfg.t_end);
    while (t < cfg.t_end * (1.0 - 1e-15)) {
        bool hits_boundary = false;
        double trial = h;
        if (t + trial >= boundary) {
            trial = boundary - t;
            hits_boundary = true;
        }
        const double err = step_dp45(rhs, t, trial, y, ynext, cfg.rtol, cfg.atol, work);
        if (err <= 1.0) {
            y = ynext;
            t = hits_boundary ? boundary : t + trial;
            if (post_step) post_step(y);
            const bool at_output = cfg.sample_dt <= 0.0 || hits_boundary;
            if (on_sample && at_output) on_sample(t, y);
            if (hits_boundary) boundary = next_sample_time(t, cfg.sample_dt, cfg.t_end);
            const double grow = err <= 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h = std::max(trial * grow, cfg.dt_min);
        } else {
            h = trial * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            if (h < cfg.dt_min)
                throw StepFailure("integrate_ode: step size underflow at t = " + std::to_string(t));
        }
    }
}

namespace {

template <class State>
Trajectory<State> run_integration(const std::vector<double>& y0, const IntegratorConfig& cfg,
                                  const FlatRhs& rhs, const FlatPost& post,
                                  const std::function<State(const std::vector<double>&)>& unflatten,
                                  const ObserverMap<State>& observers) {
    Trajectory<State> traj;
    std::vector<double> y = y0;
    integrate_ode(rhs, y, cfg,
                  [&](double t, const std::vector<double>& flat) {
                      State s = unflatten(flat);
                      for (const auto& [name, fn] : observers)
                          traj.observables[name].push_back(fn(t, s));
                      traj.times.push_back(t);
                      traj.states.push_back(std::move(s));
                  },
                  post);
    traj.validate();
    return traj;
}

}  // namespace

Trajectory<PhaseState> integrate(const ModelParams& params, const PhaseState& init,
                                 const IntegratorConfig& cfg,
                                 const ObserverMap<PhaseState>& observers) {
    if (init.size() != params.n()) throw DimensionMismatch("integrate: state size != N");
    const FlatRhs rhs = [&params](double, const std::vector<double>& y, std::vector<double>& dy) {
        PhaseState s;
        s.thetas = y;
        dy = kuramoto_rhs(params, s);
    };
    const auto unflatten = [](const std::vector<double>& y) {
        PhaseState s;
        s.thetas = y;
        return s;
    };
    return run_integration<PhaseState>(init.thetas, cfg, rhs, {}, unflatten, observers);
}

Trajectory<SpinConfiguration> integrate(const ModelParams& params, const SpinConfiguration& init,
                                        const IntegratorConfig& cfg,
                                        const ObserverMap<SpinConfiguration>& observers) {
    if (init.size() != params.n()) throw DimensionMismatch("integrate: state size != N");
    const std::size_t n = params.n();
    const auto unflatten = [n](const std::vector<double>& y) {
        SpinConfiguration s;
        s.spins.resize(n);
        for (std::size_t j = 0; j < n; ++j) s.spins[j] = Vec3{y[3 * j], y[3 * j + 1], y[3 * j + 2]};
        return s;
    };
    const FlatRhs rhs = [&params, &unflatten](double, const std::vector<double>& y,
                                              std::vector<double>& dy) {
        const auto rates = spin_rhs(params, unflatten(y));
        dy.resize(y.size());
        for (std::size_t j = 0; j < rates.size(); ++j) {
            dy[3 * j] = rates[j].x;
            dy[3 * j + 1] = rates[j].y;
            dy[3 * j + 2] = rates[j].z;
        }
    };
    FlatPost post;
    if (cfg.renormalize) {
        post = [n](std::vector<double>& y) {
            for (std::size_t j = 0; j < n; ++j) {
                Vec3 s{y[3 * j], y[3 * j + 1], y[3 * j + 2]};
                s = normalized(s);
                y[3 * j] = s.x;
                y[3 * j + 1] = s.y;
                y[3 * j + 2] = s.z;
            }
        };
    }
    std::vector<double> y0(3 * n);
    for (std::size_t j = 0; j < n; ++j) {
        y0[3 * j] = init.spins[j].x;
        y0[3 * j + 1] = init.spins[j].y;
        y0[3 * j + 2] = init.spins[j].z;
    }
    return run_integration<SpinConfiguration>(y0, cfg, rhs, post, unflatten, observers);
}

Trajectory<std::vector<Complex>> integrate_complex(const ModelParams& params,
                                                   const std::vector<Complex>& init,
                                                   const IntegratorConfig& cfg) {
    if (init.size() != params.n()) throw DimensionMismatch("integrate_complex: state size != N");
    for (std::size_t j = 0; j < init.size(); ++j)
        if (std::abs(std::abs(init[j]) - 1.0) >= 1e-9)
            throw NonUnimodularInput("integrate_complex: |z_" + std::to_string(j) + "| != 1");
    const std::size_t n = params.n();
    const auto unflatten = [n](const std::vector<double>& y) {
        std::vector<Complex> z(n);
        for (std::size_t j = 0; j < n; ++j) z[j] = Complex(y[2 * j], y[2 * j + 1]);
        return z;
    };
    const FlatRhs rhs = [&params, &unflatten](double, const std::vector<double>& y,
                                              std::vector<double>& dy) {
        const auto rates = complex_rates(params, unflatten(y));
        dy.resize(y.size());
        for (std::size_t j = 0; j < rates.size(); ++j) {
            dy[2 * j] = rates[j].real();
            dy[2 * j + 1] = rates[j].imag();
        }
    };
    std::vector<double> y0(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        y0[2 * j] = init[j].real();
        y0[2 * j + 1] = init[j].imag();
    }
    return run_integration<std::vector<Complex>>(y0, cfg, rhs, {}, unflatten, {});
}

bool frequencies_locked(const ModelParams& params, const Trajectory<PhaseState>& traj,
                        std::size_t window, double tol) {
    if (window < 1) throw InsufficientData("frequencies_locked: window must be >= 1");
    if (traj.size() < window)
        throw InsufficientData("frequencies_locked: trajectory shorter than window");
    for (std::size_t i = traj.size() - window; i < traj.size(); ++i) {
        const auto rates = kuramoto_rhs(params, traj.states[i]);
        const double m = mean_of(rates);
        for (double rate : rates)
            if (std::abs(rate - m) >= tol) return false;
    }
    return true;
}

}  // namespace kuramoto
