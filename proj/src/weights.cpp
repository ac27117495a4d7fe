#include "aacs/weights.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>

namespace aacs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Running log-sum-exp with Neumaier compensation in the scaled domain.
class LogAccumulator {
public:
    void add(double log_x) {
        if (log_x == -kInf) return;
        if (log_x > scale_) {
            const double r = std::exp(scale_ - log_x);
            sum_ *= r;
            comp_ *= r;
            scale_ = log_x;
        }
        const double x = std::exp(log_x - scale_);
        const double t = sum_ + x;
        if (std::fabs(sum_) >= x)
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double log_value() const { return scale_ + std::log(sum_ + comp_); }

private:
    double scale_ = -kInf;
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// log(q / (1 - q)) for 0 < q < 1.
double log_geometric(double q) { return std::log(q) - std::log1p(-q); }

}  // namespace

double WeightTable::rho(std::size_t n) const { return std::exp(log_rho.at(n)); }

WeightTable compute_weights(const Spectrum& s, std::size_t n_max) {
    if (n_max < 1) throw RangeError("weight table needs n_max >= 1");
    if (auto count = s.level_count(); count && n_max >= *count) {
        std::ostringstream msg;
        msg << "n_max=" << n_max << " requested beyond explicit list of " << *count << " levels";
        throw RangeError(msg.str());
    }
    const auto report = validate(s, n_max);
    if (!report.ok) throw ValidationError("invalid spectrum '" + s.name() + "': " + describe(report));

    WeightTable w;
    w.spectrum_id = s.fingerprint();
    w.log_rho.resize(n_max + 1);
    w.log_rho[0] = 0.0;
    // Extended-precision running sum: only the final rounding of each entry remains.
    long double acc = 0.0L;
    for (std::size_t n = 1; n <= n_max; ++n) {
        acc += static_cast<long double>(s.log_level(n));
        w.log_rho[n] = static_cast<double>(acc);
    }

    if (const auto e_star = s.e_star()) {
        w.j_star = *e_star;
    } else {
        w.j_star = estimate_radius(w.log_rho);
        w.j_star_estimated = true;
    }
    return w;
}

double convergence_radius(const WeightTable& w) noexcept { return w.j_star; }

double estimate_radius(std::span<const double> log_rho) {
    if (log_rho.size() < 2) throw RangeError("radius estimate needs at least rho_0 and rho_1");
    const std::size_t n = log_rho.size() - 1;
    return std::exp(log_rho[n] / static_cast<double>(n));
}

void check_action_range(const WeightTable& w, double J, double edge) {
    if (!std::isfinite(J) || J < 0.0) {
        std::ostringstream msg;
        msg << "J=" << J << " outside [0, J*)";
        throw RangeError(msg.str());
    }
    if (!w.j_star_estimated && std::isfinite(w.j_star) && J > w.j_star * (1.0 - edge)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "J=" << J << " too close to or beyond J*=" << w.j_star << " (edge guard " << edge
            << ")";
        throw RangeError(msg.str());
    }
}

double moment_coordinate(const Spectrum& s, std::size_t n) {
    return s.bounded() ? -s.gap(n) : s.level(n);
}

TruncatedSeries truncate_series(const WeightTable& w, const Spectrum& s, double J, double tol,
                                TailTarget target, int moment_order, double edge) {
    if (w.spectrum_id != s.fingerprint())
        throw ValidationError("weight table was built for a different spectrum");
    if (!(tol > 0.0)) throw RangeError("tolerance must be positive");
    if (moment_order < 0 || moment_order > 2) throw RangeError("moment order must be 0, 1 or 2");
    check_action_range(w, J, edge);

    TruncatedSeries out;
    if (J == 0.0) {
        out.log_terms = {0.0};
        return out;
    }

    const double log_J = std::log(J);
    const double log_tol = std::log(tol);
    const bool bounded = s.bounded();
    const std::size_t last = w.n_max();
    LogAccumulator acc;

    for (std::size_t n = 0; n <= last; ++n) {
        const double lt = static_cast<double>(n) * log_J - w.log_rho[n];
        out.log_terms.push_back(lt);
        acc.add(lt);
        if (n == 0 && moment_order > 0 && !bounded) continue;

        const bool has_next = s.has_level(n + 1);
        const double e_n = s.level(n);
        const double e_next = has_next ? s.level(n + 1) : e_n;
        const double q0 = J / e_next;
        if (!(q0 < 1.0)) continue;

        const double log_sum = acc.log_value();
        const double log_tail0 = lt + log_geometric(q0);
        std::array<double, 3> log_rel{log_tail0 - log_sum, -kInf, -kInf};
        bool certified = true;

        for (int k = 1; k <= moment_order; ++k) {
            if (bounded) {
                // |x_m| = gap_m is decreasing, so gap_{n+1} bounds every later coordinate.
                const double g = has_next ? s.gap(n + 1) : s.gap(n);
                log_rel[k] = log_rel[0] + k * std::log(g);
            } else {
                double growth;
                if (has_next)
                    growth = e_next / e_n;
                else if (n >= 2)
                    growth = e_n / s.level(n - 1);
                else
                    growth = kInf;
                const double qk = std::pow(growth, k) * q0;
                if (!(qk < 1.0)) {
                    certified = false;
                    break;
                }
                log_rel[k] = lt + k * std::log(e_n) + log_geometric(qk) - log_sum;
            }
        }
        if (!certified) continue;

        bool done;
        if (target == TailTarget::absolute) {
            done = log_tail0 <= log_tol;
        } else {
            done = true;
            for (int k = 0; k <= moment_order; ++k) done = done && log_rel[k] <= log_tol;
        }
        if (done) {
            out.log_sum = log_sum;
            out.log_tail = log_tail0;
            for (int k = 0; k <= moment_order; ++k) out.rel_tail[k] = std::exp(log_rel[k]);
            return out;
        }
    }

    SeriesValue partial;
    partial.log_value = acc.log_value();
    partial.value = std::exp(partial.log_value);
    partial.tail_bound = kInf;
    partial.terms_used = out.log_terms.size();
    std::ostringstream msg;
    msg.precision(17);
    msg << "tail bound " << tol << " not reached within " << partial.terms_used
        << " terms at J=" << J << " (raise n_max or move J away from J*)";
    throw TruncationError(msg.str(), partial);
}

SeriesValue normalization(const WeightTable& w, const Spectrum& s, double J,
                          const SeriesOptions& opts) {
    const auto series = truncate_series(w, s, J, opts.tol, TailTarget::absolute, 0, opts.edge);
    SeriesValue v;
    v.log_value = series.log_sum;
    v.value = std::exp(series.log_sum);
    v.tail_bound = std::exp(series.log_tail);
    v.terms_used = series.terms();
    return v;
}

}  // namespace aacs
