#include "kuramoto/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kuramoto/core.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/util.hpp"

namespace kuramoto {

CouplingBounds coupling_bounds(const FrequencySpec& freqs) {
    const std::size_t n = freqs.size();
    if (n < 2) throw DimensionMismatch("coupling_bounds: need at least two oscillators");
    double min_gap = std::numeric_limits<double>::infinity();
    double max_gap = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            const double gap = std::abs(freqs.omega(j) - freqs.omega(k));
            min_gap = std::min(min_gap, gap);
            max_gap = std::max(max_gap, gap);
        }
    const double factor = static_cast<double>(n) / (2.0 * static_cast<double>(n - 1));
    return {factor * min_gap, factor * max_gap};
}

std::vector<std::pair<std::size_t, std::size_t>> detect_locking(const Trajectory<PhaseState>& traj,
                                                                double window, double tol) {
    traj.validate();
    if (traj.size() < 2) throw InsufficientData("detect_locking: need at least two samples");
    const double t_end = traj.times.back();
    const double t_from = t_end - window;
    if (traj.times.front() > t_from + 1e-12)
        throw InsufficientData("detect_locking: trajectory shorter than the window");
    std::size_t i0 = 0;
    while (i0 < traj.size() && traj.times[i0] < t_from - 1e-12) ++i0;
    if (traj.size() - i0 < 2) throw InsufficientData("detect_locking: too few samples in window");

    const std::size_t n = traj.states.front().size();
    std::vector<std::pair<std::size_t, std::size_t>> locked;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = i0; i < traj.size(); ++i) {
                const double d = traj.states[i].thetas[j] - traj.states[i].thetas[k];
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            if (hi - lo < tol) locked.emplace_back(j, k);
        }
    return locked;
}

double pair_lock_residual(const std::vector<Complex>& z, Complex r, std::size_t j, std::size_t k,
                          const ModelParams& params) {
    if (j >= z.size() || k >= z.size()) throw DimensionMismatch("pair_lock_residual: index out of range");
    if (j == k) throw SameIndex("pair_lock_residual: j == k");
    if (params.lambda <= 0.0) throw ZeroCoupling("pair_lock_residual: lambda must be positive");
    return antisym_form(z[j] - z[k], r) - (params.freqs.omega(j) - params.freqs.omega(k)) / params.lambda;
}

double triple_lock_residual(const std::array<double, 3>& phis, const std::array<double, 3>& omegas) {
    return (omegas[1] - omegas[2]) * std::sin(phis[0]) + (omegas[2] - omegas[0]) * std::sin(phis[1]) +
           (omegas[0] - omegas[1]) * std::sin(phis[2]);
}

PhaseState SyncSolution::phase_state(double theta0) const {
    std::vector<double> thetas(phis.size());
    for (std::size_t j = 0; j < phis.size(); ++j) thetas[j] = theta0 + phis[j];
    return PhaseState(std::move(thetas));
}

namespace {

/// RHS of the self-consistency relation at coupling lambda:
/// (1/N) sum_j eps_j sqrt(1 - dev_j^2 / (lambda J)^2).
double sector_mean_field(const std::vector<double>& devs, const std::vector<int>& eps, double lambda,
                         double J) {
    double sum = 0.0;
    for (std::size_t j = 0; j < devs.size(); ++j) {
        const double s = devs[j] / (lambda * J);
        const double arg = std::max(0.0, 1.0 - s * s);
        sum += static_cast<double>(eps[j]) * std::sqrt(arg);
    }
    return sum / static_cast<double>(devs.size());
}

}  // namespace

std::optional<SyncSolution> solve_self_consistent_J(const FrequencySpec& freqs, double lambda,
                                                    const std::vector<int>& epsilons) {
    if (lambda <= 0.0) throw ZeroCoupling("solve_self_consistent_J: lambda must be positive");
    const std::size_t n = freqs.size();
    if (epsilons.size() != n) throw DimensionMismatch("solve_self_consistent_J: epsilons size != N");
    for (int e : epsilons)
        if (e != 1 && e != -1) throw Error("solve_self_consistent_J: epsilons must be +1 or -1");

    const double Omega = freqs.mean();
    std::vector<double> devs(n);
    double maxdev = 0.0;
    int plus_minus = 0;
    for (std::size_t j = 0; j < n; ++j) {
        devs[j] = freqs.omega(j) - Omega;
        maxdev = std::max(maxdev, std::abs(devs[j]));
        plus_minus += epsilons[j];
    }

    const double J_lo = maxdev / lambda;  // below this the square roots turn imaginary
    if (J_lo > 1.0) return std::nullopt;

    const auto residual = [&](double J) { return J - sector_mean_field(devs, epsilons, lambda, J); };

    double root = std::numeric_limits<double>::quiet_NaN();
    if (maxdev == 0.0) {
        // Equal frequencies: the relation is J = (N+ - N-)/N directly.
        const double J0 = static_cast<double>(plus_minus) / static_cast<double>(n);
        if (J0 <= 0.0) return std::nullopt;
        root = J0;
    } else {
        // Damped fixed-point pass from the aligned-sector guess (fast path,
        // and the only way to land on a tangent double root).
        double J = std::clamp(static_cast<double>(plus_minus) / static_cast<double>(n),
                              std::max(J_lo, 1e-3), 1.0);
        for (int it = 0; it < 300; ++it)
            J = std::clamp(J + 0.5 * (sector_mean_field(devs, epsilons, lambda, J) - J),
                           J_lo, 1.0);
        if (std::abs(residual(J)) < 1e-12) root = J;

        // Guarantee the largest root: scan down from J = 1 for the first sign
        // change of the residual and bisect it.
        const int grid = 4096;
        double j_hi = 1.0;
        double f_hi = residual(j_hi);
        for (int i = 1; i <= grid; ++i) {
            const double j_i = 1.0 - (1.0 - J_lo) * static_cast<double>(i) / grid;
            const double f_i = residual(j_i);
            if (f_hi >= 0.0 && f_i < 0.0) {
                double lo = j_i;
                double hi = j_hi;
                for (int b = 0; b < 200 && hi - lo > 1e-16; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    (residual(mid) >= 0.0 ? hi : lo) = mid;
                }
                const double bracket_root = 0.5 * (lo + hi);
                if (!(bracket_root <= root)) root = bracket_root;  // also handles NaN
                break;
            }
            j_hi = j_i;
            f_hi = f_i;
        }
        if (std::isnan(root)) return std::nullopt;
    }

    SyncSolution sol;
    sol.J_mod = root;
    sol.epsilons = epsilons;
    sol.phis.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = std::clamp(devs[j] / (lambda * root), -1.0, 1.0);
        const double base = std::asin(s);
        sol.phis[j] = epsilons[j] == 1 ? base : pi - base;
    }
    return sol;
}

double asymptotic_J(const FrequencySpec& freqs, double lambda, const std::vector<int>& epsilons) {
    if (lambda <= 0.0) throw ZeroCoupling("asymptotic_J: lambda must be positive");
    const std::size_t n = freqs.size();
    if (epsilons.size() != n) throw DimensionMismatch("asymptotic_J: epsilons size != N");
    const double Omega = freqs.mean();
    int plus_minus = 0;
    double weighted_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        plus_minus += epsilons[j];
        const double dev = freqs.omega(j) - Omega;
        weighted_sq += static_cast<double>(epsilons[j]) * dev * dev;
    }
    const double J0 = static_cast<double>(plus_minus) / static_cast<double>(n);
    if (J0 <= 0.0) throw DegenerateDenominator("asymptotic_J: leading term (N+ - N-)/N is not positive");
    weighted_sq /= static_cast<double>(n);
    return J0 - weighted_sq / (2.0 * lambda * lambda * J0 * J0);
}

namespace {

double sync_residual_from_angles(const std::vector<double>& thetas, const ModelParams& params) {
    PhaseState state;
    state.thetas = thetas;
    const OrderParameter op = order_parameter(state);
    const double Omega = params.freqs.mean();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < thetas.size(); ++j) {
        const double phi = thetas[j] - op.theta0;
        const double s = std::sin(phi);
        num += (params.freqs.omega(j) - Omega) * s;
        den += s * s;
    }
    if (den < 1e-14)
        throw DegenerateDenominator("global_sync_residual: state is aligned with its mean field");
    return params.lambda * op.modulus - num / den;
}

}  // namespace

double global_sync_residual(const PhaseState& state, const ModelParams& params) {
    if (state.size() != params.n()) throw DimensionMismatch("global_sync_residual: state size != N");
    return sync_residual_from_angles(state.thetas, params);
}

double global_sync_residual(const SpinConfiguration& state, const ModelParams& params) {
    if (state.size() != params.n()) throw DimensionMismatch("global_sync_residual: state size != N");
    return sync_residual_from_angles(to_phase(state).thetas, params);
}

SyncClass classify(std::span<const double> r_window, ClassifyThresholds thr) {
    if (r_window.size() < 2) throw InsufficientData("classify: need at least two samples");
    double lo = r_window[0];
    double hi = r_window[0];
    for (double r : r_window) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const double m = mean_of(r_window);
    if (hi - lo <= thr.constancy) {
        if (m <= thr.edge) return SyncClass::unsynchronized;
        if (m >= 1.0 - thr.edge) return SyncClass::fully_synchronized;
        return SyncClass::partially_synchronized;
    }
    return m < thr.incoherent_mean ? SyncClass::unsynchronized : SyncClass::nonstationary;
}

SteadyStateResult settle(const ModelParams& params, const PhaseState& init, double t_max,
                         double rate_tol, const IntegratorConfig& proto) {
    if (init.size() != params.n()) throw DimensionMismatch("settle: state size != N");
    if (!(t_max > 0.0)) throw Error("settle: t_max must be positive");
    constexpr double chunk = 20.0;
    constexpr std::size_t window = 10;

    SteadyStateResult result;
    result.state = init;
    double t_done = 0.0;
    while (t_done < t_max) {
        IntegratorConfig cfg = proto;
        cfg.t_end = std::min(chunk, t_max - t_done);
        cfg.sample_dt = cfg.t_end / static_cast<double>(window + 2);
        const auto traj = integrate(params, result.state, cfg);
        result.state = traj.states.back();
        // Wrap the carried phases: the dynamics is 2pi-periodic, and letting the
        // phases grow secularly inflates the integrator's relative-error budget,
        // which can hold the rate spread above rate_tol indefinitely.
        for (double& theta : result.state.thetas) theta = wrap_angle(theta);
        t_done += traj.times.back();
        result.t_reached = t_done;

        std::vector<double> r_tail;
        const std::size_t from = traj.size() > window ? traj.size() - window : 0;
        for (std::size_t i = from; i < traj.size(); ++i)
            r_tail.push_back(order_parameter(traj.states[i]).modulus);
        result.r_mod = mean_of(r_tail);

        if (traj.size() >= window && frequencies_locked(params, traj, window, rate_tol)) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace kuramoto
