#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aacs {

enum class Model { harmonic, hydrogen_like };

std::string_view to_string(Model model);
std::optional<Model> parse_model(std::string_view name);

/// Dimensionless level rule e(n). `gap`, when set, returns e_star - e(n)
/// without the cancellation of computing it from e(n).
struct LevelRule {
    std::function<double(std::size_t)> level;
    std::function<double(std::size_t)> gap;
};

/// A nondegenerate discrete spectrum E_n = omega * e_n with E_0 = 0.
///
/// Instances are immutable and cheap to copy; explicit level tables are
/// shared between copies.
class Spectrum {
public:
    /// Spectrum defined by a rule, valid for every n. `e_star` is the limit
    /// of e_n: +inf for unbounded spectra, nullopt when unknown.
    static Spectrum from_rule(std::string name, double omega, LevelRule rule,
                              std::optional<double> e_star);

    /// Spectrum from a finite list of energies (energy units). The list is
    /// shifted so its first entry is zero; the shift is recorded. `e_star`
    /// is the dimensionless limit of the shifted levels, if known.
    static Spectrum from_energies(std::string name, double omega, std::vector<double> energies,
                                  std::optional<double> e_star);

    const std::string& name() const noexcept { return name_; }
    double omega() const noexcept { return omega_; }
    double shift_applied() const noexcept { return shift_; }
    std::optional<double> e_star() const noexcept { return e_star_; }

    /// True when e_star is known and finite.
    bool bounded() const noexcept;

    /// Number of levels for explicit lists, nullopt for rule spectra.
    std::optional<std::size_t> level_count() const noexcept;
    bool has_level(std::size_t n) const noexcept;

    /// Dimensionless level e_n. Throws RangeError past the end of an explicit list.
    double level(std::size_t n) const;
    double energy(std::size_t n) const { return omega_ * level(n); }

    /// e_star - e_n; only meaningful when bounded().
    double gap(std::size_t n) const;

    /// log e_n for n >= 1, using the gap near the accumulation point.
    double log_level(std::size_t n) const;

    /// Identity used to reject overlaps between states of different spectra.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    Spectrum() = default;
    void compute_fingerprint();

    std::string name_;
    double omega_ = 1.0;
    double shift_ = 0.0;
    std::optional<double> e_star_;
    LevelRule rule_;
    std::shared_ptr<const std::vector<double>> table_;
    std::uint64_t fingerprint_ = 0;
};

Spectrum make_builtin(Model model, double omega);

struct Violation {
    std::size_t n = 0;
    std::string description;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
    double shift_applied = 0.0;
};

/// Checks E_0 = 0, strict monotonicity, finiteness and e_n < e_star for
/// n <= n_max (or the end of an explicit list). Never throws.
ValidationReport validate(const Spectrum& s, std::size_t n_max);

/// Parses a spectrum document without validating the levels.
/// Throws ValidationError on malformed input or omega <= 0.
Spectrum parse_spectrum(std::string_view document);

/// parse_spectrum followed by validate; throws ValidationError listing the
/// violations when the levels are not strictly increasing.
Spectrum load_spectrum(std::string_view document);

std::string describe(const ValidationReport& report);

}  // namespace aacs
