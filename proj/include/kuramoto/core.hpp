#pragma once

#include "kuramoto/types.hpp"

namespace kuramoto {

/// Antisymmetric real-valued form [u, v] = (u vbar - v ubar) / (2i).
/// For unimodular u = e^{ia}, v = e^{ib} this is sin(a - b).
inline double antisym_form(Complex u, Complex v) {
    // (u vbar - v ubar)/(2i) = Im(u vbar)
    return std::imag(u * std::conj(v));
}

/// Symmetric real-valued form {u, v} = (u vbar + v ubar) / 2.
/// For unimodular arguments this is cos(a - b).
inline double sym_form(Complex u, Complex v) {
    return std::real(u * std::conj(v));
}

/// Mean field of an angular state: r = (1/N) sum e^{i theta_j}.
[[nodiscard]] OrderParameter order_parameter(const PhaseState& state);

/// Mean field of a spin state: J = (1/N) sum S_j; r is J's planar projection.
[[nodiscard]] OrderParameter order_parameter(const SpinConfiguration& state);

/// Planar embedding of angles into spins, S_j = <cos theta_j, sin theta_j, 0>.
[[nodiscard]] SpinConfiguration to_spin(const PhaseState& state);

/// Inverse of to_spin. Requires every spin unit-norm and planar
/// (|e3 . S_j| < 1e-9); otherwise throws NonPlanarInput so the caller knows
/// to stay on the full 3D pipeline.
[[nodiscard]] PhaseState to_phase(const SpinConfiguration& state);

}  // namespace kuramoto
