#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aacs/resolution.hpp"
#include "aacs/spectrum.hpp"
#include "aacs/weights.hpp"

namespace aacs {

inline constexpr std::uint64_t kDefaultSeed = 20010601;

enum class CheckStatus { pass, fail, skipped };
std::string_view to_string(CheckStatus status);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    /// Worst observed metric and the threshold it is held to (NaN when not applicable).
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyOptions {
    double tol = kDefaultTolerance;
    std::size_t n_max = kDefaultNmax;
    std::uint64_t seed = kDefaultSeed;
    /// Builtin model the spectrum came from; enables closed-form checks.
    std::optional<Model> model;
    /// Measure for the resolution-of-unity checks; builtins default to theirs.
    std::optional<Measure> measure;
    /// Weight table depth for the near-J* exponent fit.
    std::size_t asymptotic_n_max = 2'000'000;
};

/// Runs the invariant suites: label continuity, resolution of unity, temporal
/// stability, action identity, variance routes and asymptotics. Checks that
/// need a closed form or a measure the spectrum lacks are reported skipped.
std::vector<CheckResult> run_verification(const Spectrum& s, const VerifyOptions& opts);

/// Empirical Lipschitz constant of l -> coefficients(l) around `label`:
/// max over steps h of ||c(l') - c(l)|| / (|dJ| + |dgamma|) on an 8-point stencil.
struct ContinuityProbe {
    double constant = 0.0;
    /// Constant restricted to each step size, coarse to fine.
    std::vector<double> per_step;
};
ContinuityProbe probe_label_continuity(const Spectrum& s, const WeightTable& w, double J,
                                       double gamma, const std::vector<double>& steps,
                                       double tol);

}  // namespace aacs
