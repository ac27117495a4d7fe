#include "aacs/observables.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

namespace aacs {

namespace {

class Neumaier {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Occupation probabilities p_n (normalized over the truncation) and moment coordinates.
struct Distribution {
    TruncatedSeries series;
    std::vector<double> p;
    std::vector<double> x;
    double total = 0.0;
    double reference = 0.0;  // e_n = reference + x_n
};

Distribution distribution(const Spectrum& s, const WeightTable& w, double J, double tol,
                          double edge, int order) {
    Distribution d;
    d.series = truncate_series(w, s, J, tol, TailTarget::relative, order, edge);
    const std::size_t K = d.series.terms();
    d.p.resize(K);
    d.x.resize(K);
    Neumaier total;
    for (std::size_t n = 0; n < K; ++n) {
        d.p[n] = std::exp(d.series.log_terms[n] - d.series.log_sum);
        d.x[n] = moment_coordinate(s, n);
        total.add(d.p[n]);
    }
    d.total = total.value();
    d.reference = s.bounded() ? *s.e_star() : 0.0;
    return d;
}

double weighted_mean(const Distribution& d, double shift, int power) {
    Neumaier acc;
    for (std::size_t n = 0; n < d.p.size(); ++n) acc.add(d.p[n] * std::pow(d.x[n] - shift, power));
    return acc.value() / d.total;
}

// 1/2 sum_{n,m} (x_n - x_m)^2 p_n p_m / P^2, summed over n < m.
double pairwise_variance(const Distribution& d) {
    const std::size_t K = d.p.size();
    Neumaier outer;
    for (std::size_t n = 0; n < K; ++n) {
        double row = 0.0;
        const double xn = d.x[n];
        for (std::size_t m = n + 1; m < K; ++m) {
            const double diff = xn - d.x[m];
            row += d.p[m] * diff * diff;
        }
        outer.add(d.p[n] * row);
    }
    return outer.value() / (d.total * d.total);
}

}  // namespace

double energy_mean(const Spectrum& s, const WeightTable& w, double J, const SeriesOptions& opts) {
    const auto d = distribution(s, w, J, opts.tol, opts.edge, 1);
    return s.omega() * (d.reference + weighted_mean(d, 0.0, 1));
}

VariancePoint variance(const Spectrum& s, const WeightTable& w, double J,
                       const VarianceOptions& opts) {
    const auto d = distribution(s, w, J, opts.tol, opts.edge, 2);
    const double omega = s.omega();

    // Moments of H about the first-pass mean c: v = <(x-c)^2> - <x-c>^2.
    const double c = weighted_mean(d, 0.0, 1);
    const double m1 = weighted_mean(d, c, 1);
    const double m2 = weighted_mean(d, c, 2);
    const double v = m2 - m1 * m1;

    Neumaier raw2;
    for (std::size_t n = 0; n < d.p.size(); ++n) {
        const double e = d.reference + d.x[n];
        raw2.add(d.p[n] * e * e);
    }

    // Propagate the certified relative tails of |x|^k through the shift by c.
    const auto& r = d.series.rel_tail;
    const double ac = std::fabs(c);
    const double r1 = r[1] + ac * r[0];
    const double r2 = 2.0 * r[2] + 2.0 * c * c * r[0];
    const double d2 = r2 + m2 * r[0];
    const double d1 = r1 + std::fabs(m1) * r[0];
    const double rounding = 64.0 * DBL_EPSILON * (m2 + ac * std::sqrt(m2));
    const double dv = d2 + 2.0 * std::fabs(m1) * d1 + d1 * d1 + rounding;

    VariancePoint pt;
    pt.J = J;
    pt.mean = omega * (d.reference + c + m1);
    pt.second_moment = omega * omega * raw2.value() / d.total;
    pt.variance = omega * omega * v;
    pt.tail_bound = omega * omega * dv;
    pt.terms_used = d.series.terms();

    if (opts.cross_check && d.p.size() <= opts.cross_check_max_terms) {
        const double pairwise = pairwise_variance(d);
        pt.double_sum_variance = omega * omega * pairwise;
        double allowed = rounding;
        if (v != 0.0) allowed = std::max(allowed, opts.cross_check_rel_tol * std::fabs(v));
        if (!(std::fabs(pairwise - v) <= allowed)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "variance routes disagree at J=" << J << ": moments " << v << ", double sum "
                << pairwise;
            throw NumericalError(msg.str());
        }
    }
    return pt;
}

std::vector<VariancePoint> variance_curve(const Spectrum& s, const WeightTable& w,
                                          std::span<const double> grid,
                                          const VarianceOptions& opts) {
    std::vector<VariancePoint> out;
    out.reserve(grid.size());
    for (double J : grid) {
        try {
            out.push_back(variance(s, w, J, opts));
        } catch (const Error& e) {
            VariancePoint pt;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            pt.J = J;
            pt.mean = pt.second_moment = pt.variance = pt.tail_bound = nan;
            pt.error_code = e.exit_code();
            pt.error = e.what();
            out.push_back(std::move(pt));
        }
    }
    return out;
}

SlopeEstimate small_J_slope(const Spectrum& s, const WeightTable& w,
                            const VarianceOptions& opts) {
    SlopeEstimate est;
    est.e1 = s.level(1);
    est.J = {1e-3, 1e-4, 1e-5};
    const double omega2 = s.omega() * s.omega();
    for (std::size_t i = 0; i < 3; ++i)
        est.ratios[i] = variance(s, w, est.J[i], opts).variance / (omega2 * est.J[i]);

    // v(J)/J = e1 + a J + b J^2 + ...; the grid ratio is 10.
    constexpr double r = 10.0;
    est.coarse = (r * est.ratios[1] - est.ratios[0]) / (r - 1.0);
    est.fine = (r * est.ratios[2] - est.ratios[1]) / (r - 1.0);
    est.slope = (r * r * est.fine - est.coarse) / (r * r - 1.0);

    constexpr double kStability = 1e-4;
    if (!(std::fabs(est.fine - est.coarse) <= kStability * std::fabs(est.slope))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "small-J extrapolation unstable: v/J = " << est.ratios[0] << ", " << est.ratios[1]
            << ", " << est.ratios[2] << "; first-level estimates " << est.coarse << ", "
            << est.fine;
        throw NumericalError(msg.str());
    }
    return est;
}

std::vector<double> default_fit_window() {
    std::vector<double> window;
    for (int k = 1; k <= 5; ++k) window.push_back(1.0 - std::pow(10.0, -1.5 * k));
    return window;
}

ExponentFit near_Jstar_exponent(const Spectrum& s, const WeightTable& w,
                                std::span<const double> window, const VarianceOptions& opts) {
    if (w.j_star_estimated || w.j_star != 1.0)
        throw RangeError("near-J* analysis requires an exact J* = 1 (bounded spectrum with "
                         "omega = E*)");

    const auto defaults = default_fit_window();
    if (window.empty()) window = defaults;

    VarianceOptions point_opts = opts;
    point_opts.cross_check = false;
    const double omega2 = s.omega() * s.omega();

    ExponentFit fit;
    for (double J : window) {
        try {
            const double v = variance(s, w, J, point_opts).variance / omega2;
            if (v > 0.0) {
                fit.gaps.push_back(1.0 - J);
                fit.variances.push_back(v);
            } else {
                fit.skipped.push_back(J);
            }
        } catch (const RangeError&) {
            fit.skipped.push_back(J);
        } catch (const TruncationError&) {
            fit.skipped.push_back(J);
        }
    }
    if (fit.gaps.size() < 3) {
        std::ostringstream msg;
        msg << "near-J* fit needs at least 3 usable points, got " << fit.gaps.size()
            << " (n_max=" << w.n_max() << ")";
        throw NumericalError(msg.str());
    }

    const std::size_t m = fit.gaps.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += std::log(fit.gaps[i]);
        sy += std::log(fit.variances[i]);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log(fit.gaps[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(fit.variances[i]) - my);
    }
    fit.exponent = sxy / sxx;
    fit.log_intercept = my - fit.exponent * mx;

    // Leading coefficient of v ~ (1-J) * rho_inf * sum delta_m^2 / rho_m.
    const std::size_t n_max = w.n_max();
    Neumaier dsq, weighted;
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double g = s.gap(n);
        dsq.add(g * g);
        weighted.add(g * g * std::exp(-w.log_rho[n]));
    }
    fit.delta_sq_sum = dsq.value();
    const double g_last = s.gap(n_max);
    fit.summable = static_cast<double>(n_max) * g_last * g_last <= 1e-2 * fit.delta_sq_sum;
    fit.rho_limit = std::exp(w.log_rho[n_max]);
    fit.rho_converged = std::fabs(w.log_rho[n_max] - w.log_rho[n_max / 2]) <= 1e-3;

    if (fit.summable && fit.rho_converged) {
        fit.leading_coefficient = fit.rho_limit * weighted.value();
        std::size_t nearest = 0;
        for (std::size_t i = 1; i < m; ++i)
            if (fit.gaps[i] < fit.gaps[nearest]) nearest = i;
        const double observed = fit.variances[nearest] / fit.gaps[nearest];
        fit.coefficient_rel_diff =
            std::fabs(observed - *fit.leading_coefficient) / *fit.leading_coefficient;
        fit.coefficient_consistent = *fit.coefficient_rel_diff <= kCoefficientTolerance;
    }
    return fit;
}

}  // namespace aacs
