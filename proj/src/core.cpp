#include "kuramoto/core.hpp"

#include <cmath>

#include "kuramoto/errors.hpp"
#include "kuramoto/util.hpp"

namespace kuramoto {

FrequencySpec::FrequencySpec(std::vector<double> omegas) : omegas_(std::move(omegas)) {
    if (omegas_.empty()) throw DimensionMismatch("FrequencySpec: empty frequency list");
    for (double w : omegas_)
        if (!std::isfinite(w)) throw Error("FrequencySpec: non-finite frequency");
}

double FrequencySpec::mean() const { return mean_of(omegas_); }

double FrequencySpec::variance() const { return variance_of(omegas_); }

std::vector<Complex> PhaseState::unit_complex() const {
    std::vector<Complex> z(thetas.size());
    for (std::size_t j = 0; j < thetas.size(); ++j)
        z[j] = Complex(std::cos(thetas[j]), std::sin(thetas[j]));
    return z;
}

SpinConfiguration SpinConfiguration::from_angles(const std::vector<double>& thetas) {
    std::vector<Vec3> s(thetas.size());
    for (std::size_t j = 0; j < thetas.size(); ++j)
        s[j] = Vec3{std::cos(thetas[j]), std::sin(thetas[j]), 0.0};
    return SpinConfiguration(std::move(s));
}

SpinConfiguration SpinConfiguration::with_planar_momenta() const {
    SpinConfiguration out = *this;
    std::vector<Vec3> p(spins.size());
    for (std::size_t j = 0; j < spins.size(); ++j) p[j] = cross(spins[j], e3);
    out.momenta = std::move(p);
    return out;
}

double SpinConfiguration::max_norm_deviation() const {
    double worst = 0.0;
    for (const auto& s : spins) worst = std::max(worst, std::abs(norm(s) - 1.0));
    return worst;
}

double SpinConfiguration::max_planarity_deviation() const {
    double worst = 0.0;
    for (const auto& s : spins) worst = std::max(worst, std::abs(dot(e3, s)));
    return worst;
}

std::string to_string(SyncClass c) {
    switch (c) {
        case SyncClass::unsynchronized: return "unsynchronized";
        case SyncClass::partially_synchronized: return "partially_synchronized";
        case SyncClass::fully_synchronized: return "fully_synchronized";
        case SyncClass::nonstationary: return "nonstationary";
    }
    return "unknown";
}

OrderParameter order_parameter(const PhaseState& state) {
    if (state.size() == 0) throw DimensionMismatch("order_parameter: empty state");
    Complex r{0.0, 0.0};
    for (double th : state.thetas) r += Complex(std::cos(th), std::sin(th));
    r /= static_cast<double>(state.size());
    OrderParameter out;
    out.r = r;
    out.J = Vec3{r.real(), r.imag(), 0.0};
    out.modulus = std::abs(r);
    out.theta0 = std::arg(r);
    return out;
}

OrderParameter order_parameter(const SpinConfiguration& state) {
    if (state.size() == 0) throw DimensionMismatch("order_parameter: empty state");
    Vec3 J{};
    for (const auto& s : state.spins) J += s;
    J = J / static_cast<double>(state.size());
    OrderParameter out;
    out.J = J;
    out.r = Complex(J.x, J.y);
    out.modulus = norm(J);
    out.theta0 = std::arg(out.r);
    return out;
}

SpinConfiguration to_spin(const PhaseState& state) { return SpinConfiguration::from_angles(state.thetas); }

PhaseState to_phase(const SpinConfiguration& state) {
    constexpr double tol = 1e-9;
    std::vector<double> thetas(state.size());
    for (std::size_t j = 0; j < state.size(); ++j) {
        const Vec3& s = state.spins[j];
        if (std::abs(dot(e3, s)) >= tol)
            throw NonPlanarInput("to_phase: spin " + std::to_string(j) + " leaves the plane");
        if (std::abs(norm(s) - 1.0) >= tol)
            throw NonUnimodularInput("to_phase: spin " + std::to_string(j) + " is not unit length");
        thetas[j] = std::atan2(s.y, s.x);
    }
    return PhaseState(std::move(thetas));
}

}  // namespace kuramoto
