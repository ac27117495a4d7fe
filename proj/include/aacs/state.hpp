#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "aacs/spectrum.hpp"
#include "aacs/weights.hpp"

namespace aacs {

using Amplitudes = std::vector<std::complex<double>>;

/// Action-angle label (J, gamma). gamma is never wrapped.
struct StateLabel {
    double J = 0.0;
    double gamma = 0.0;
};

/// Truncated amplitudes c_n = N(J)^{-1/2} J^{n/2} exp(-i e_n gamma) / sqrt(rho_n).
///
/// The truncated vector is normalized over its own support; the omitted mass
/// of the infinite state is at most tail_mass_bound.
struct StateCoefficients {
    Amplitudes c;
    double tail_mass_bound = 0.0;
    StateLabel label;
    std::uint64_t spectrum_id = 0;
};

StateCoefficients coefficients(const Spectrum& s, const WeightTable& w, StateLabel label,
                               double tol = kDefaultTolerance, double edge = kDefaultEdge);

/// <a|b> = sum conj(a_n) b_n. Throws ValidationError for states of different spectra.
std::complex<double> overlap(const StateCoefficients& a, const StateCoefficients& b);

/// |1 - sum |c_n|^2|
double norm_deficit(const StateCoefficients& x) noexcept;

/// Euclidean distance between amplitude vectors, shorter one zero-padded.
double distance(const Amplitudes& a, const Amplitudes& b) noexcept;

}  // namespace aacs
