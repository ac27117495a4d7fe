#include "aacs/state.hpp"

#include <cfloat>
#include <cmath>

#include "aacs/phase.hpp"

namespace aacs {

namespace {
// Rounding allowance on the unit norm of a computed state.
constexpr double kNormRounding = 64.0 * DBL_EPSILON;
}  // namespace

StateCoefficients coefficients(const Spectrum& s, const WeightTable& w, StateLabel label,
                               double tol, double edge) {
    const auto series = truncate_series(w, s, label.J, tol, TailTarget::relative, 0, edge);

    StateCoefficients out;
    out.label = label;
    out.spectrum_id = s.fingerprint();
    out.c.resize(series.terms());
    for (std::size_t n = 0; n < series.terms(); ++n) {
        const double magnitude = std::exp(0.5 * (series.log_terms[n] - series.log_sum));
        out.c[n] = magnitude * unit_phase(s.level(n), label.gamma);
    }
    out.tail_mass_bound = label.J == 0.0 ? 0.0 : series.rel_tail[0] + kNormRounding;
    return out;
}

std::complex<double> overlap(const StateCoefficients& a, const StateCoefficients& b) {
    if (a.spectrum_id != b.spectrum_id)
        throw ValidationError("overlap between states of different spectra");
    std::complex<double> sum{0.0, 0.0};
    const std::size_t n = std::min(a.c.size(), b.c.size());
    for (std::size_t i = 0; i < n; ++i) sum += std::conj(a.c[i]) * b.c[i];
    return sum;
}

double norm_deficit(const StateCoefficients& x) noexcept {
    double sum = 0.0;
    for (const auto& c : x.c) sum += std::norm(c);
    return std::fabs(1.0 - sum);
}

double distance(const Amplitudes& a, const Amplitudes& b) noexcept {
    const std::size_t n = std::max(a.size(), b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = i < a.size() ? a[i] : std::complex<double>{};
        const auto y = i < b.size() ? b[i] : std::complex<double>{};
        sum += std::norm(x - y);
    }
    return std::sqrt(sum);
}

}  // namespace aacs
