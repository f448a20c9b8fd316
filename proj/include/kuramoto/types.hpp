#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kuramoto/errors.hpp"
#include "kuramoto/vec3.hpp"

namespace kuramoto {

using Complex = std::complex<double>;

/// Natural frequencies of the oscillator ensemble.
class FrequencySpec {
  public:
    explicit FrequencySpec(std::vector<double> omegas);

    [[nodiscard]] std::size_t size() const { return omegas_.size(); }
    [[nodiscard]] const std::vector<double>& omegas() const { return omegas_; }
    [[nodiscard]] double omega(std::size_t j) const { return omegas_.at(j); }

    /// Mean frequency Omega = (1/N) sum omega_j.
    [[nodiscard]] double mean() const;
    /// Population variance (1/N) sum (omega_j - Omega)^2.
    [[nodiscard]] double variance() const;

  private:
    std::vector<double> omegas_;
};

/// Angular coordinates, stored unwrapped on the real line so winding and
/// drift stay visible; wrap only inside circle-valued observables.
struct PhaseState {
    std::vector<double> thetas;

    PhaseState() = default;
    explicit PhaseState(std::vector<double> t) : thetas(std::move(t)) {}

    [[nodiscard]] std::size_t size() const { return thetas.size(); }
    [[nodiscard]] std::vector<Complex> unit_complex() const;
};

/// Classical spins, optionally paired with momenta P_j.
/// Constructors produce exactly unit spins; integrator output may carry
/// visible norm drift, which is itself a diagnostic (see dynamics tests).
struct SpinConfiguration {
    std::vector<Vec3> spins;
    std::optional<std::vector<Vec3>> momenta;

    SpinConfiguration() = default;
    explicit SpinConfiguration(std::vector<Vec3> s) : spins(std::move(s)) {}

    [[nodiscard]] std::size_t size() const { return spins.size(); }

    /// Planar embedding S_j = <cos theta_j, sin theta_j, 0>.
    static SpinConfiguration from_angles(const std::vector<double>& thetas);

    /// Attach the planar-dual momenta P_j = S_j x e3 (constructed, not integrated).
    [[nodiscard]] SpinConfiguration with_planar_momenta() const;

    [[nodiscard]] double max_norm_deviation() const;
    [[nodiscard]] double max_planarity_deviation() const;
};

/// Mean field of a state: complex r = |r| e^{i theta0} and 3-vector J.
/// For planar states |r| = |J|; for genuinely 3D states modulus is |J| and
/// (r, theta0) describe the planar projection of J.
struct OrderParameter {
    Complex r{0.0, 0.0};
    Vec3 J{};
    double modulus = 0.0;
    double theta0 = 0.0;
};

enum class SyncClass {
    unsynchronized,
    partially_synchronized,
    fully_synchronized,
    nonstationary,
};

[[nodiscard]] std::string to_string(SyncClass c);

/// Time-stamped states plus named scalar observable series.
template <class State>
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::map<std::string, std::vector<double>> observables;

    [[nodiscard]] std::size_t size() const { return times.size(); }

    /// Throws Error unless times are strictly increasing and lengths match.
    void validate() const {
        if (times.size() != states.size())
            throw Error("trajectory: times/states length mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw Error("trajectory: times not strictly increasing");
        for (const auto& [name, series] : observables)
            if (series.size() != times.size())
                throw Error("trajectory: observable '" + name + "' length mismatch");
    }

    [[nodiscard]] const std::vector<double>& series(const std::string& name) const {
        auto it = observables.find(name);
        if (it == observables.end()) throw Error("trajectory: no observable '" + name + "'");
        return it->second;
    }
};

}  // namespace kuramoto
