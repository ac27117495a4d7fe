#include "aacs/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "aacs/error.hpp"
#include "aacs/quadrature.hpp"

namespace aacs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kInitialNodes = 16;
constexpr int kMaxDoublings = 4;
constexpr double kQuadratureRelTol = 1e-12;

double checked_density(const Measure& m, double u) {
    const double rho = m.density(u);
    if (!(rho >= 0.0)) {
        std::ostringstream msg;
        msg << "measure density negative or undefined at u=" << u;
        throw ValidationError(msg.str());
    }
    return rho;
}

double integrate_continuous(const Measure& m, std::size_t n, std::size_t nodes) {
    const double power = static_cast<double>(n);
    if (m.hint == QuadratureHint::semi_infinite_exponential) {
        // int_0^inf u^n e^{-r u} h(u) du = r^{-1} int_0^inf e^{-v} (v/r)^n h(v/r) dv
        const auto rule = gauss_laguerre(nodes);
        const double r = m.decay_rate;
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            const double u = rule.nodes[i] / r;
            const double h = m.reduced_density(u);
            if (!(h >= 0.0)) throw ValidationError("measure density negative or undefined");
            sum += rule.weights[i] * std::pow(u, power) * h;
        }
        return sum / r;
    }

    std::vector<double> edges{0.0};
    for (double b : m.breakpoints)
        if (b > 0.0 && b < m.upper) edges.push_back(b);
    edges.push_back(m.upper);
    std::sort(edges.begin(), edges.end());

    const auto rule = gauss_legendre(nodes);
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            const double u = mid + half * rule.nodes[i];
            sum += rule.weights[i] * std::pow(u, power) * checked_density(m, u);
        }
        total += half * sum;
    }
    return total;
}

}  // namespace

Measure builtin_measure(Model model) {
    Measure m;
    switch (model) {
        case Model::harmonic:
            m.density = [](double u) { return std::exp(-u); };
            m.upper = kInf;
            m.hint = QuadratureHint::semi_infinite_exponential;
            m.decay_rate = 1.0;
            m.reduced_density = [](double) { return 1.0; };
            break;
        case Model::hydrogen_like:
            // The continuous part alone has moments 1/(2(n+1)) -> 0 while rho_n -> 1/2;
            // the missing mass sits at u = J* = 1.
            m.density = [](double) { return 0.5; };
            m.upper = 1.0;
            m.atoms = {{1.0, 0.5}};
            m.hint = QuadratureHint::finite_interval;
            break;
    }
    return m;
}

void validate_measure(const Measure& m) {
    if (!m.density) throw ValidationError("measure has no density");
    if (!(m.upper > 0.0)) throw ValidationError("measure upper limit U must be positive");
    if (std::isinf(m.upper) && m.hint != QuadratureHint::semi_infinite_exponential)
        throw ValidationError("infinite U requires an exponential density");
    if (m.hint == QuadratureHint::semi_infinite_exponential) {
        if (!m.reduced_density) throw ValidationError("exponential measure lacks reduced density");
        if (!(m.decay_rate > 0.0)) throw ValidationError("exponential decay rate must be positive");
    }
    for (const auto& atom : m.atoms) {
        if (!(atom.mass > 0.0)) throw ValidationError("atom masses must be positive");
        if (!(atom.location >= 0.0 && atom.location <= m.upper))
            throw ValidationError("atom location outside [0, U]");
    }
}

Measure parse_measure(std::string_view document) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("measure document parse error: ") + e.what());
    }
    Measure m;
    try {
        const auto& U = doc.at("U");
        if (U.is_string()) {
            if (U.get<std::string>() != "inf") throw ValidationError("U must be a number or \"inf\"");
            m.upper = kInf;
        } else {
            m.upper = U.get<double>();
        }

        const auto& density = doc.at("density");
        const std::string kind = density.at("kind").get<std::string>();
        if (kind == "exponential") {
            const double scale = density.value("scale", 1.0);
            const double rate = density.value("rate", 1.0);
            if (!(scale >= 0.0)) throw ValidationError("exponential scale must be nonnegative");
            m.density = [scale, rate](double u) { return scale * std::exp(-rate * u); };
            if (std::isinf(m.upper)) {
                m.hint = QuadratureHint::semi_infinite_exponential;
                m.decay_rate = rate;
                m.reduced_density = [scale](double) { return scale; };
            }
        } else if (kind == "constant") {
            const double value = density.at("value").get<double>();
            if (!(value >= 0.0)) throw ValidationError("constant density must be nonnegative");
            m.density = [value](double) { return value; };
        } else if (kind == "table") {
            auto us = density.at("u").get<std::vector<double>>();
            auto rhos = density.at("rho").get<std::vector<double>>();
            if (us.size() < 2 || us.size() != rhos.size())
                throw ValidationError("table density needs matching u/rho arrays of length >= 2");
            if (us.front() != 0.0 || us.back() != m.upper)
                throw ValidationError("table density must span [0, U]");
            for (std::size_t i = 1; i < us.size(); ++i)
                if (!(us[i] > us[i - 1])) throw ValidationError("table u must be increasing");
            for (double r : rhos)
                if (!(r >= 0.0)) throw ValidationError("table density must be nonnegative");
            m.breakpoints.assign(us.begin() + 1, us.end() - 1);
            m.density = [us, rhos](double u) {
                auto it = std::upper_bound(us.begin(), us.end(), u);
                if (it == us.begin()) return rhos.front();
                if (it == us.end()) return rhos.back();
                const std::size_t i = static_cast<std::size_t>(it - us.begin());
                const double f = (u - us[i - 1]) / (us[i] - us[i - 1]);
                return rhos[i - 1] + f * (rhos[i] - rhos[i - 1]);
            };
        } else {
            throw ValidationError("density kind must be exponential, constant or table");
        }

        if (auto it = doc.find("atoms"); it != doc.end())
            for (const auto& a : *it)
                m.atoms.push_back({a.at("u").get<double>(), a.at("w").get<double>()});
    } catch (const json::exception& e) {
        throw ValidationError(std::string("measure document: ") + e.what());
    }
    validate_measure(m);
    return m;
}

double measure_moment(const Measure& m, std::size_t n) {
    validate_measure(m);
    std::size_t nodes = kInitialNodes;
    double previous = integrate_continuous(m, n, nodes);
    bool converged = false;
    for (int d = 0; d < kMaxDoublings; ++d) {
        nodes *= 2;
        const double current = integrate_continuous(m, n, nodes);
        const double diff = std::fabs(current - previous);
        previous = current;
        if (diff <= kQuadratureRelTol * std::fabs(current)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "moment n=" << n << " quadrature did not converge with " << nodes << " nodes";
        throw NumericalError(msg.str());
    }
    double atoms = 0.0;
    for (const auto& a : m.atoms) atoms += a.mass * std::pow(a.location, static_cast<double>(n));
    return previous + atoms;
}

double moment_check(const Measure& m, const WeightTable& w, std::size_t n_check) {
    if (n_check > w.n_max()) throw RangeError("n_check exceeds the weight table");
    double worst = 0.0;
    for (std::size_t n = 0; n <= n_check; ++n) {
        const double rho = w.rho(n);
        worst = std::max(worst, std::fabs(measure_moment(m, n) - rho) / rho);
    }
    return worst;
}

namespace {

// sin(pi x) with exact zeros at integers.
double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r == std::trunc(r)) return 0.0;
    if (r > 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    if (r > 0.5) r = 1.0 - r;
    if (r < -0.5) r = -1.0 - r;
    return std::sin(std::numbers::pi * r);
}

double sinc_average(double Gamma, double delta) {
    if (delta == 0.0) return 1.0;
    if (std::isinf(Gamma)) return 0.0;
    const double cycles = (Gamma / std::numbers::pi) * delta;
    return sin_pi(cycles) / (Gamma * delta);
}

}  // namespace

ProjectorMatrix gamma_averaged_projector(const Spectrum& s, const WeightTable& w, double J,
                                         double Gamma, std::size_t n_max,
                                         const SeriesOptions& opts) {
    if (!(Gamma > 0.0)) throw RangeError("Gamma must be positive or infinite");
    if (n_max > w.n_max()) throw RangeError("projector dimension exceeds the weight table");
    const auto N = normalization(w, s, J, opts);

    ProjectorMatrix out;
    out.J = J;
    out.Gamma = Gamma;
    const std::size_t dim = n_max + 1;
    out.entries = Eigen::MatrixXcd::Zero(dim, dim);

    std::vector<double> amplitude(dim, 0.0);
    if (J == 0.0) {
        amplitude[0] = 1.0;
    } else {
        const double log_J = std::log(J);
        for (std::size_t n = 0; n < dim; ++n)
            amplitude[n] = std::exp(0.5 * (n * log_J - w.log_rho[n] - N.log_value));
    }
    std::vector<double> levels(dim);
    for (std::size_t n = 0; n < dim; ++n) levels[n] = s.level(n);

    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t m = 0; m < dim; ++m) {
            const double factor = sinc_average(Gamma, levels[n] - levels[m]);
            out.entries(n, m) = amplitude[n] * amplitude[m] * factor;
        }
    }
    return out;
}

std::vector<double> unity_check(const Measure& m, const WeightTable& w, const Spectrum& s,
                                std::size_t n_check) {
    if (w.spectrum_id != s.fingerprint())
        throw ValidationError("weight table was built for a different spectrum");
    if (!w.j_star_estimated) {
        const double U = m.upper, Js = w.j_star;
        const bool match = (std::isinf(U) && std::isinf(Js)) ||
                           (std::isfinite(U) && std::isfinite(Js) &&
                            std::fabs(U - Js) <= 1e-12 * std::max(1.0, Js));
        if (!match) {
            std::ostringstream msg;
            msg << "measure upper limit U=" << U << " does not match J*=" << Js;
            throw ValidationError(msg.str());
        }
    }
    if (n_check > w.n_max()) throw RangeError("n_check exceeds the weight table");
    std::vector<double> diag;
    diag.reserve(n_check + 1);
    for (std::size_t n = 0; n <= n_check; ++n) diag.push_back(measure_moment(m, n) / w.rho(n));
    return diag;
}

}  // namespace aacs
