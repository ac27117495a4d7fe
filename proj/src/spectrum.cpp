#include "aacs/spectrum.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "aacs/error.hpp"

namespace aacs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_omega(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        std::ostringstream msg;
        msg << "omega must be positive and finite, got " << omega;
        throw ValidationError(msg.str());
    }
}

// Number of leading levels that enter the fingerprint.
// Rule spectra are identified by their first levels.
constexpr std::size_t kFingerprintLevels = 32;

struct Fnv1a {
    std::uint64_t h = 1469598103934665603ULL;
    void bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    }
    void real(double x) {
        const auto bits = std::bit_cast<std::uint64_t>(x);
        bytes(&bits, sizeof bits);
    }
};

}  // namespace

std::string_view to_string(Model model) {
    switch (model) {
        case Model::harmonic: return "harmonic";
        case Model::hydrogen_like: return "hydrogen_like";
    }
    return "unknown";
}

std::optional<Model> parse_model(std::string_view name) {
    if (name == "harmonic") return Model::harmonic;
    if (name == "hydrogen_like") return Model::hydrogen_like;
    return std::nullopt;
}

Spectrum Spectrum::from_rule(std::string name, double omega, LevelRule rule,
                             std::optional<double> e_star) {
    require_omega(omega);
    if (!rule.level) throw ValidationError("level rule is empty");
    Spectrum s;
    s.name_ = std::move(name);
    s.omega_ = omega;
    s.e_star_ = e_star;
    s.rule_ = std::move(rule);
    s.compute_fingerprint();
    return s;
}

Spectrum Spectrum::from_energies(std::string name, double omega, std::vector<double> energies,
                                 std::optional<double> e_star) {
    require_omega(omega);
    if (energies.empty()) throw ValidationError("explicit level list is empty");
    Spectrum s;
    s.name_ = std::move(name);
    s.omega_ = omega;
    s.shift_ = energies.front();
    s.e_star_ = e_star;
    std::vector<double> levels;
    levels.reserve(energies.size());
    for (double E : energies) levels.push_back((E - s.shift_) / omega);
    s.table_ = std::make_shared<const std::vector<double>>(std::move(levels));
    s.compute_fingerprint();
    return s;
}

bool Spectrum::bounded() const noexcept { return e_star_ && std::isfinite(*e_star_); }

std::optional<std::size_t> Spectrum::level_count() const noexcept {
    if (table_) return table_->size();
    return std::nullopt;
}

bool Spectrum::has_level(std::size_t n) const noexcept { return !table_ || n < table_->size(); }

double Spectrum::level(std::size_t n) const {
    if (table_) {
        if (n >= table_->size()) {
            std::ostringstream msg;
            msg << "level n=" << n << " requested beyond explicit list of " << table_->size()
                << " levels";
            throw RangeError(msg.str());
        }
        return (*table_)[n];
    }
    return rule_.level(n);
}

double Spectrum::gap(std::size_t n) const {
    if (!table_ && rule_.gap) return rule_.gap(n);
    return e_star_.value_or(kInf) - level(n);
}

double Spectrum::log_level(std::size_t n) const {
    if (bounded()) {
        const double es = *e_star_;
        const double g = gap(n);
        if (g < 0.5 * es) return std::log(es) + std::log1p(-g / es);
    }
    return std::log(level(n));
}

void Spectrum::compute_fingerprint() {
    Fnv1a f;
    f.bytes(name_.data(), name_.size());
    f.real(omega_);
    f.real(shift_);
    f.real(e_star_.value_or(std::numeric_limits<double>::quiet_NaN()));
    const std::size_t count = table_ ? table_->size() : kFingerprintLevels;
    for (std::size_t n = 0; n < count; ++n) f.real(level(n));
    fingerprint_ = f.h;
}

Spectrum make_builtin(Model model, double omega) {
    switch (model) {
        case Model::harmonic:
            return Spectrum::from_rule(
                "harmonic", omega,
                LevelRule{[](std::size_t n) { return static_cast<double>(n); }, {}}, kInf);
        case Model::hydrogen_like: {
            auto gap = [](std::size_t n) {
                const double m = static_cast<double>(n) + 1.0;
                return 1.0 / (m * m);
            };
            return Spectrum::from_rule(
                "hydrogen_like", omega,
                LevelRule{[gap](std::size_t n) { return 1.0 - gap(n); }, gap}, 1.0);
        }
    }
    throw ValidationError("unknown builtin model");
}

ValidationReport validate(const Spectrum& s, std::size_t n_max) {
    ValidationReport report;
    report.shift_applied = s.shift_applied();
    auto add = [&](std::size_t n, std::string what) {
        report.violations.push_back({n, std::move(what)});
    };

    const auto e_star = s.e_star();
    if (e_star && !(*e_star > 0.0)) add(0, "e_star must be positive");

    std::size_t last = n_max;
    if (auto count = s.level_count()) last = std::min(last, *count - 1);

    // Near a finite limit adjacent levels can round to the same double; their
    // gaps stay distinct, so order is judged on -gap there.
    const bool bounded = s.bounded();
    double prev = 0.0;
    for (std::size_t n = 0; n <= last; ++n) {
        const double e = s.level(n);
        const double key = bounded ? -s.gap(n) : e;
        if (!std::isfinite(e) || !std::isfinite(key)) {
            add(n, "level is not finite");
            continue;
        }
        if (n == 0) {
            if (e != 0.0) add(0, "ground level is not zero");
        } else if (key == prev) {
            add(n, "degenerate level (equal to previous)");
        } else if (key < prev) {
            add(n, "decreasing level (below previous)");
        }
        if (bounded && !(s.gap(n) > 0.0)) add(n, "level at or above e_star");
        prev = key;
    }
    report.ok = report.violations.empty();
    return report;
}

std::string describe(const ValidationReport& report) {
    std::ostringstream out;
    if (report.ok) return "ok";
    constexpr std::size_t kListed = 10;
    out << report.violations.size() << " violation(s):";
    for (std::size_t i = 0; i < std::min(kListed, report.violations.size()); ++i)
        out << " [n=" << report.violations[i].n << ": " << report.violations[i].description << "]";
    if (report.violations.size() > kListed)
        out << " and " << report.violations.size() - kListed << " more";
    return out.str();
}

Spectrum parse_spectrum(std::string_view document) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("spectrum document parse error: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw ValidationError("spectrum document must be an object");
        const double omega = doc.at("omega").get<double>();
        const std::string kind = doc.at("kind").get<std::string>();
        const std::string name = doc.value("name", std::string{});

        std::optional<double> e_star;
        if (auto it = doc.find("e_star"); it != doc.end() && !it->is_null()) {
            if (it->is_string()) {
                if (it->get<std::string>() != "inf")
                    throw ValidationError("e_star must be a number, \"inf\" or null");
                e_star = kInf;
            } else {
                e_star = it->get<double>();
            }
        }

        if (kind == "builtin") {
            const auto model_name = doc.at("model").get<std::string>();
            const auto model = parse_model(model_name);
            if (!model) throw ValidationError("unknown builtin model '" + model_name + "'");
            return make_builtin(*model, omega);
        }
        if (kind == "explicit") {
            auto energies = doc.at("levels").get<std::vector<double>>();
            return Spectrum::from_energies(name.empty() ? "explicit" : name, omega,
                                           std::move(energies), e_star);
        }
        throw ValidationError("spectrum kind must be 'builtin' or 'explicit', got '" + kind + "'");
    } catch (const json::exception& e) {
        throw ValidationError(std::string("spectrum document: ") + e.what());
    }
}

Spectrum load_spectrum(std::string_view document) {
    Spectrum s = parse_spectrum(document);
    constexpr std::size_t kRuleCheckDepth = 1000;
    const auto report = validate(s, s.level_count() ? *s.level_count() : kRuleCheckDepth);
    if (!report.ok) throw ValidationError("invalid spectrum '" + s.name() + "': " + describe(report));
    return s;
}

}  // namespace aacs
