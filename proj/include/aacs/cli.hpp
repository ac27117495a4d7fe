#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "aacs/spectrum.hpp"
#include "aacs/table.hpp"
#include "aacs/verify.hpp"
#include "aacs/weights.hpp"

namespace aacs::cli {

/// Exit codes shared by every command.
enum ExitCode : int {
    kSuccess = 0,
    kInvalid = 1,
    kNumerical = 2,
    kVerificationFailed = 3,
};

struct RunConfig {
    std::optional<Model> model;
    std::string spectrum_file;
    std::optional<double> omega;
    double tol = kDefaultTolerance;
    std::size_t n_max = kDefaultNmax;
    OutputFormat format = OutputFormat::csv;
    std::string out_path;
    std::uint64_t seed = kDefaultSeed;
    std::string measure_file;
};

/// Throws ValidationError unless tol > 0, n_max >= 8 and exactly one
/// spectrum source is given.
void check_config(const RunConfig& config);

struct ResolvedSpectrum {
    Spectrum spectrum;
    /// Set when the spectrum is a builtin model (from --model or a builtin document).
    std::optional<Model> model;
};

/// Builds the spectrum named by --model or --file, applying --omega.
/// With `validated` false, explicit lists are returned even when invalid.
ResolvedSpectrum resolve_spectrum(const RunConfig& config, bool validated = true);

/// "a:b:step" (inclusive, tolerant of rounding at b), a comma list, or "" for an empty grid.
std::vector<double> parse_grid(const std::string& text);

int cmd_spectrum(const RunConfig& config, std::size_t count, std::ostream& out);
int cmd_weights(const RunConfig& config, std::size_t count, std::optional<double> J,
                std::ostream& out);
int cmd_state(const RunConfig& config, double J, double gamma, std::ostream& out);
int cmd_variance(const RunConfig& config, const std::vector<double>& grid, std::ostream& out);
int cmd_evolve(const RunConfig& config, double J, double gamma, double t, std::ostream& out);
int cmd_resolution(const RunConfig& config, double J, double Gamma, std::size_t n_check,
                   std::size_t dim, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);

}  // namespace aacs::cli
