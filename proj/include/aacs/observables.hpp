#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aacs/spectrum.hpp"
#include "aacs/weights.hpp"

namespace aacs {

struct VarianceOptions {
    double tol = kDefaultTolerance;
    double edge = kDefaultEdge;
    /// Evaluate the pairwise double sum as an independent second route.
    bool cross_check = true;
    /// The pairwise route is O(K^2); it is skipped above this many terms.
    std::size_t cross_check_max_terms = 20000;
    double cross_check_rel_tol = 1e-8;
};

/// Energy statistics of |J,gamma> (independent of gamma). Energies carry
/// omega, so variance is in energy^2.
struct VariancePoint {
    double J = 0.0;
    double mean = 0.0;
    double second_moment = 0.0;
    double variance = 0.0;
    double tail_bound = 0.0;
    /// Variance from 1/2 sum_{n,m} (E_n - E_m)^2 p_n p_m, when evaluated.
    std::optional<double> double_sum_variance;
    std::size_t terms_used = 0;
    /// Nonzero marks a failed point in a curve (value is the CLI exit code).
    int error_code = 0;
    std::string error;
};

/// omega * sum e_n J^n/rho_n / sum J^n/rho_n
double energy_mean(const Spectrum& s, const WeightTable& w, double J,
                   const SeriesOptions& opts = {});

/// Throws NumericalError when the moment and double-sum routes disagree.
VariancePoint variance(const Spectrum& s, const WeightTable& w, double J,
                       const VarianceOptions& opts = {});

/// Evaluates every grid point in order; failures are flagged, not thrown.
std::vector<VariancePoint> variance_curve(const Spectrum& s, const WeightTable& w,
                                          std::span<const double> grid,
                                          const VarianceOptions& opts = {});

struct SlopeEstimate {
    double slope = 0.0;
    double e1 = 0.0;
    std::array<double, 3> J{};
    /// v(J)/J at each J (dimensionless).
    std::array<double, 3> ratios{};
    /// First-level Richardson estimates from the coarse and fine pairs.
    double coarse = 0.0;
    double fine = 0.0;
};

/// Limit of v(J)/(omega^2 J) as J -> 0 by two-level Richardson extrapolation
/// over J = 1e-3, 1e-4, 1e-5.
SlopeEstimate small_J_slope(const Spectrum& s, const WeightTable& w,
                            const VarianceOptions& opts = {});

struct ExponentFit {
    double exponent = 0.0;
    double log_intercept = 0.0;
    /// 1 - J and v/omega^2 of the points used in the fit.
    std::vector<double> gaps;
    std::vector<double> variances;
    /// Window points dropped because the truncation was infeasible.
    std::vector<double> skipped;

    /// sum delta_m^2 up to n_max and whether it looks convergent.
    double delta_sq_sum = 0.0;
    bool summable = false;
    /// rho_{n_max}, used as rho_infinity when the weights have converged.
    double rho_limit = 0.0;
    bool rho_converged = false;
    /// rho_inf * sum_m delta_m^2 / rho_m, the predicted v/(1-J) as J -> 1.
    std::optional<double> leading_coefficient;
    /// |v/(1-J) at the point nearest J* - coefficient| / coefficient.
    std::optional<double> coefficient_rel_diff;
    bool coefficient_consistent = false;
};

/// Default window: J = 1 - 10^{-1.5k}, k = 1..5.
std::vector<double> default_fit_window();

/// Least-squares exponent of v against (1 - J) near J* = 1. Window points
/// whose truncation cannot be certified within the table are skipped.
ExponentFit near_Jstar_exponent(const Spectrum& s, const WeightTable& w,
                                std::span<const double> window = {},
                                const VarianceOptions& opts = {});

inline constexpr double kCoefficientTolerance = 0.2;

}  // namespace aacs
