#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>

#include "aacs/spectrum.hpp"
#include "aacs/state.hpp"
#include "aacs/weights.hpp"

namespace aacs {

/// Amplitudes after exp(-iHt); t in physical time units.
struct EvolvedState {
    Amplitudes c;
    double t = 0.0;
    std::optional<StateLabel> source_label;
};

/// (J, gamma) -> (J, gamma + omega t)
StateLabel evolve_label(StateLabel l, double t, double omega) noexcept;

/// c_n -> exp(-i omega e_n t) c_n over the given eigenbasis amplitudes.
EvolvedState evolve_coefficients(std::span<const std::complex<double>> amplitudes,
                                 const Spectrum& s, double t);
EvolvedState evolve_coefficients(const StateCoefficients& x, const Spectrum& s, double t);

/// || exp(-iHt)|l> - |l(t)> || with both states truncated identically.
double temporal_stability_residual(const Spectrum& s, const WeightTable& w, StateLabel l,
                                   double t, double tol = kDefaultTolerance);

/// Both sides of <l| exp(-iHt) |psi> = <l(-t)|psi>.
std::pair<std::complex<double>, std::complex<double>> kinematic_representation_check(
    const Spectrum& s, const WeightTable& w, std::span<const std::complex<double>> psi,
    StateLabel l, double t, double tol = kDefaultTolerance);

}  // namespace aacs
