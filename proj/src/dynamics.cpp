#include "aacs/dynamics.hpp"

#include "aacs/phase.hpp"

namespace aacs {

StateLabel evolve_label(StateLabel l, double t, double omega) noexcept {
    return {l.J, l.gamma + omega * t};
}

EvolvedState evolve_coefficients(std::span<const std::complex<double>> amplitudes,
                                 const Spectrum& s, double t) {
    EvolvedState out;
    out.t = t;
    out.c.assign(amplitudes.begin(), amplitudes.end());
    if (t == 0.0) return out;
    const double angle = s.omega() * t;
    for (std::size_t n = 0; n < out.c.size(); ++n) out.c[n] *= unit_phase(s.level(n), angle);
    return out;
}

EvolvedState evolve_coefficients(const StateCoefficients& x, const Spectrum& s, double t) {
    auto out = evolve_coefficients(std::span<const std::complex<double>>(x.c), s, t);
    out.source_label = x.label;
    return out;
}

double temporal_stability_residual(const Spectrum& s, const WeightTable& w, StateLabel l,
                                   double t, double tol) {
    const auto initial = coefficients(s, w, l, tol);
    const auto evolved = evolve_coefficients(initial, s, t);
    // Same J, so the truncation depth of the reference state matches.
    const auto relabeled = coefficients(s, w, evolve_label(l, t, s.omega()), tol);
    return distance(evolved.c, relabeled.c);
}

std::pair<std::complex<double>, std::complex<double>> kinematic_representation_check(
    const Spectrum& s, const WeightTable& w, std::span<const std::complex<double>> psi,
    StateLabel l, double t, double tol) {
    StateCoefficients evolved_psi;
    evolved_psi.c = evolve_coefficients(psi, s, t).c;
    evolved_psi.spectrum_id = s.fingerprint();

    StateCoefficients original_psi;
    original_psi.c.assign(psi.begin(), psi.end());
    original_psi.spectrum_id = s.fingerprint();

    const auto at_l = coefficients(s, w, l, tol);
    const auto at_reversed = coefficients(s, w, evolve_label(l, -t, s.omega()), tol);
    return {overlap(at_l, evolved_psi), overlap(at_reversed, original_psi)};
}

}  // namespace aacs
