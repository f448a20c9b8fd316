#include "kuramoto/variational.hpp"

#include <cmath>

#include "kuramoto/core.hpp"
#include "kuramoto/errors.hpp"
#include "kuramoto/util.hpp"

namespace kuramoto {

PhaseSpacePoint::PhaseSpacePoint(std::vector<Vec3> s, std::vector<Vec3> p)
    : spins(std::move(s)), momenta(std::move(p)) {
    if (spins.size() != momenta.size())
        throw DimensionMismatch("PhaseSpacePoint: spins/momenta length mismatch");
    if (spins.empty()) throw DimensionMismatch("PhaseSpacePoint: empty point");
}

PhaseSpacePoint PhaseSpacePoint::planar(const PhaseState& state) {
    const auto spins = SpinConfiguration::from_angles(state.thetas).spins;
    std::vector<Vec3> momenta(spins.size());
    for (std::size_t j = 0; j < spins.size(); ++j) momenta[j] = cross(spins[j], e3);
    return PhaseSpacePoint(spins, std::move(momenta));
}

namespace {

Vec3 mean_spin(const std::vector<Vec3>& spins) {
    Vec3 J{};
    for (const auto& s : spins) J += s;
    return J / static_cast<double>(spins.size());
}

}  // namespace

double lagrangian(const ModelParams& params, const std::vector<Vec3>& spins,
                  const std::vector<Vec3>& spin_rates) {
    if (spins.size() != params.n()) throw DimensionMismatch("lagrangian: spins size != N");
    if (spin_rates.size() != spins.size())
        throw DimensionMismatch("lagrangian: rates size mismatch");
    const Vec3 J = mean_spin(spins);
    double L = 0.0;
    for (std::size_t j = 0; j < spins.size(); ++j) {
        const Vec3& s = spins[j];
        L += dot(e3, cross(spin_rates[j], s));
        L -= params.freqs.omega(j) * dot(s, s);
        L += params.lambda * dot(cross(e3, cross(cross(J, s), s)), s);
    }
    return L;
}

std::vector<Vec3> euler_lagrange_residual(const ModelParams& params, const std::vector<Vec3>& spins,
                                          const std::vector<Vec3>& spin_rates) {
    if (spins.size() != params.n())
        throw DimensionMismatch("euler_lagrange_residual: spins size != N");
    if (spin_rates.size() != spins.size())
        throw DimensionMismatch("euler_lagrange_residual: rates size mismatch");
    const Vec3 J = mean_spin(spins);
    std::vector<Vec3> res(spins.size());
    for (std::size_t j = 0; j < spins.size(); ++j) {
        const Vec3& s = spins[j];
        const Vec3 in_plane_rate = spin_rates[j] - project_e3(spin_rates[j]);
        res[j] = in_plane_rate - params.freqs.omega(j) * cross(e3, s) -
                 params.lambda * cross(s, project_e3(cross(J, s)));
    }
    return res;
}

std::vector<Vec3> euler_lagrange_residual(const ModelParams& params, const SpinConfiguration& state) {
    return euler_lagrange_residual(params, state.spins, spin_rhs(params, state));
}

double hamiltonian(const ModelParams& params, const PhaseSpacePoint& point) {
    if (point.size() != params.n()) throw DimensionMismatch("hamiltonian: point size != N");
    const Vec3 J = mean_spin(point.spins);
    double H = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) {
        const Vec3& s = point.spins[j];
        const Vec3& p = point.momenta[j];
        H += -0.5 * params.freqs.omega(j) * (dot(s, s) + dot(p, p));
        H += params.lambda * dot(cross(J, s), cross(p, s));
    }
    return H;
}

std::pair<std::vector<Vec3>, std::vector<Vec3>> hamilton_rhs(const ModelParams& params,
                                                             const PhaseSpacePoint& point) {
    if (point.size() != params.n()) throw DimensionMismatch("hamilton_rhs: point size != N");
    const std::size_t n = point.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    const Vec3 J = mean_spin(point.spins);

    // The mean field's dependence on every S_j contributes the same vector
    // (1/N) sum_k S_k x (P_k x S_k) to each dH/dS_j.
    Vec3 mean_field_term{};
    for (std::size_t k = 0; k < n; ++k)
        mean_field_term += cross(point.spins[k], cross(point.momenta[k], point.spins[k]));
    mean_field_term = inv_n * mean_field_term;

    std::vector<Vec3> dS(n);
    std::vector<Vec3> dP(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vec3& s = point.spins[j];
        const Vec3& p = point.momenta[j];
        const double w = params.freqs.omega(j);
        dS[j] = -w * p + params.lambda * cross(s, cross(J, s));  // dH/dP_j
        const Vec3 grad_s = -w * s +
                            params.lambda * (cross(cross(J, s), p) + cross(cross(p, s), J)) +
                            params.lambda * mean_field_term;
        dP[j] = -grad_s;  // -dH/dS_j
    }
    return {std::move(dS), std::move(dP)};
}

Trajectory<PhaseSpacePoint> integrate_hamilton(const ModelParams& params,
                                               const PhaseSpacePoint& init,
                                               const IntegratorConfig& cfg) {
    if (init.size() != params.n()) throw DimensionMismatch("integrate_hamilton: point size != N");
    const std::size_t n = params.n();
    const auto unflatten = [n](const std::vector<double>& y) {
        std::vector<Vec3> s(n);
        std::vector<Vec3> p(n);
        for (std::size_t j = 0; j < n; ++j) {
            s[j] = Vec3{y[3 * j], y[3 * j + 1], y[3 * j + 2]};
            p[j] = Vec3{y[3 * (n + j)], y[3 * (n + j) + 1], y[3 * (n + j) + 2]};
        }
        return PhaseSpacePoint(std::move(s), std::move(p));
    };
    const auto rhs = [&params, &unflatten](double, const std::vector<double>& y,
                                           std::vector<double>& dy) {
        const auto point = unflatten(y);
        const auto [dS, dP] = hamilton_rhs(params, point);
        const std::size_t m = dS.size();
        dy.resize(6 * m);
        for (std::size_t j = 0; j < m; ++j) {
            dy[3 * j] = dS[j].x;
            dy[3 * j + 1] = dS[j].y;
            dy[3 * j + 2] = dS[j].z;
            dy[3 * (m + j)] = dP[j].x;
            dy[3 * (m + j) + 1] = dP[j].y;
            dy[3 * (m + j) + 2] = dP[j].z;
        }
    };
    std::vector<double> y(6 * n);
    for (std::size_t j = 0; j < n; ++j) {
        y[3 * j] = init.spins[j].x;
        y[3 * j + 1] = init.spins[j].y;
        y[3 * j + 2] = init.spins[j].z;
        y[3 * (n + j)] = init.momenta[j].x;
        y[3 * (n + j) + 1] = init.momenta[j].y;
        y[3 * (n + j) + 2] = init.momenta[j].z;
    }
    Trajectory<PhaseSpacePoint> traj;
    integrate_ode(rhs, y, cfg, [&](double t, const std::vector<double>& flat) {
        traj.times.push_back(t);
        traj.states.push_back(unflatten(flat));
    });
    traj.validate();
    return traj;
}

std::vector<double> phase_acceleration(const ModelParams& params, const PhaseState& state) {
    if (state.size() != params.n()) throw DimensionMismatch("phase_acceleration: state size != N");
    const std::size_t n = state.size();
    // The inner sums (lambda/N) sum_l sin(theta_l - theta_k) are exactly the
    // coupling parts of the first-order rates, so the acceleration contracts
    // to (lambda/N) sum_k cos(theta_k - theta_j)(rate_k - rate_j).
    const auto rates = kuramoto_rhs(params, state);
    const double coupling = params.lambda / static_cast<double>(n);
    std::vector<double> acc(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            sum += std::cos(state.thetas[k] - state.thetas[j]) * (rates[k] - rates[j]);
        acc[j] = coupling * sum;
    }
    return acc;
}

double curl_mismatch_closed_form(const ModelParams& params, const PhaseState& state, std::size_t j,
                                 std::size_t q) {
    if (state.size() != params.n())
        throw DimensionMismatch("curl_mismatch_closed_form: state size != N");
    if (j >= state.size() || q >= state.size())
        throw DimensionMismatch("curl_mismatch_closed_form: index out of range");
    if (j == q) throw SameIndex("curl_mismatch_closed_form: j == q");
    const double coupling = params.lambda / static_cast<double>(state.size());
    double bracket = 0.0;
    for (std::size_t k = 0; k < state.size(); ++k)
        bracket += std::cos(state.thetas[k] - state.thetas[j]) -
                   std::cos(state.thetas[k] - state.thetas[q]);
    return coupling * coupling * std::cos(state.thetas[q] - state.thetas[j]) * bracket;
}

double curl_mismatch_numeric(const ModelParams& params, const PhaseState& state, std::size_t j,
                             std::size_t q, double h) {
    if (state.size() != params.n())
        throw DimensionMismatch("curl_mismatch_numeric: state size != N");
    if (j >= state.size() || q >= state.size())
        throw DimensionMismatch("curl_mismatch_numeric: index out of range");
    if (j == q) throw SameIndex("curl_mismatch_numeric: j == q");
    if (!(h >= 1e-6 && h <= 1e-3))
        throw Error("curl_mismatch_numeric: h must lie in [1e-6, 1e-3]");
    const auto component = [&](std::size_t comp, std::size_t direction, double step) {
        PhaseState shifted = state;
        shifted.thetas[direction] += step;
        return phase_acceleration(params, shifted)[comp];
    };
    const double d_q_of_j = (component(j, q, h) - component(j, q, -h)) / (2.0 * h);
    const double d_j_of_q = (component(q, j, h) - component(q, j, -h)) / (2.0 * h);
    return d_q_of_j - d_j_of_q;
}

}  // namespace kuramoto
