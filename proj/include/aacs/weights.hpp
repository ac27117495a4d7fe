#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "aacs/error.hpp"
#include "aacs/spectrum.hpp"

namespace aacs {

inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr double kDefaultEdge = 1e-6;
inline constexpr std::size_t kDefaultNmax = 20000;

/// log rho_n = sum_{l<=n} log e_l for n = 0..n_max, plus the radius of
/// convergence J* of sum J^n / rho_n.
struct WeightTable {
    std::vector<double> log_rho;
    double j_star = std::numeric_limits<double>::infinity();
    /// Set when J* is exp(log rho_nmax / n_max) rather than the known e_star.
    bool j_star_estimated = false;
    std::uint64_t spectrum_id = 0;

    std::size_t n_max() const noexcept { return log_rho.size() - 1; }
    double rho(std::size_t n) const;
};

/// A nonnegative series value; up to rounding of the summed terms (a few ulps
/// of value) the true sum lies in [value, value + tail_bound].
struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;
    std::size_t terms_used = 0;
    /// log of value, finite even when value overflows.
    double log_value = 0.0;
};

struct SeriesOptions {
    double tol = kDefaultTolerance;
    double edge = kDefaultEdge;
};

/// Raised when the geometric tail bound cannot reach the target within the
/// weight table; carries the partial sum.
class TruncationError : public NumericalError {
public:
    TruncationError(const std::string& what, SeriesValue partial)
        : NumericalError(what), partial_(partial) {}
    const SeriesValue& partial() const noexcept { return partial_; }

private:
    SeriesValue partial_;
};

WeightTable compute_weights(const Spectrum& s, std::size_t n_max);

double convergence_radius(const WeightTable& w) noexcept;

/// rho_n^{1/n} at the last entry of a log-weight table; the fallback J* when
/// the spectrum's limit is unknown.
double estimate_radius(std::span<const double> log_rho);

/// N(J) = sum_n J^n / rho_n with an absolute certified tail bound <= opts.tol.
SeriesValue normalization(const WeightTable& w, const Spectrum& s, double J,
                          const SeriesOptions& opts = {});

/// Throws RangeError unless 0 <= J and, for an exact finite J*, J/J* <= 1 - edge.
void check_action_range(const WeightTable& w, double J, double edge);

enum class TailTarget { absolute, relative };

/// Terms t_n = J^n / rho_n for n = 0..K kept in log form, truncated where the
/// certified tail is small enough.
///
/// `rel_tail[k]` bounds sum_{n>K} |x_n|^k t_n divided by the partial sum
/// sum_{n<=K} t_n, where x_n = e_n for unbounded spectra and x_n = e_n - e_star
/// for bounded ones. Orders above the requested `moment_order` are left at 0.
struct TruncatedSeries {
    std::vector<double> log_terms;
    double log_sum = 0.0;
    std::array<double, 3> rel_tail{};
    /// Absolute tail of the plain sum, log form.
    double log_tail = -std::numeric_limits<double>::infinity();

    std::size_t terms() const noexcept { return log_terms.size(); }
};

/// Sums J^n / rho_n until the certified tail meets `tol`: absolutely for the
/// plain sum, or relative to the partial sum for every moment order up to
/// `moment_order` (0, 1 or 2).
///
/// The tail bound is geometric: with q = J / e_{K+1} < 1, every later ratio
/// t_{n+1}/t_n = J/e_{n+1} is at most q because e_n increases. For moment
/// orders on unbounded spectra the bound additionally assumes e_{n+1}/e_n is
/// nonincreasing beyond K.
TruncatedSeries truncate_series(const WeightTable& w, const Spectrum& s, double J, double tol,
                                TailTarget target, int moment_order, double edge = kDefaultEdge);

/// Moment coordinate x_n used by truncate_series and the observables.
double moment_coordinate(const Spectrum& s, std::size_t n);

}  // namespace aacs
