#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "aacs/spectrum.hpp"
#include "aacs/weights.hpp"

namespace aacs {

enum class QuadratureHint { finite_interval, semi_infinite_exponential };

struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/// Weight measure on [0, U): a nonnegative density plus point atoms.
struct Measure {
    std::function<double(double)> density;
    double upper = 1.0;
    std::vector<Atom> atoms;
    QuadratureHint hint = QuadratureHint::finite_interval;
    /// For semi_infinite_exponential: density(u) = exp(-decay_rate u) * reduced_density(u).
    double decay_rate = 1.0;
    std::function<double(double)> reduced_density;
    /// Interior points where the density has a kink; quadrature panels split there.
    std::vector<double> breakpoints;
};

/// harmonic: e^{-u} on [0, inf). hydrogen_like: 1/2 on [0, 1) plus an atom of mass 1/2 at u = 1.
Measure builtin_measure(Model model);

/// Measure document:
/// { "U": float | "inf",
///   "density": {"kind": "exponential", "scale": a, "rate": r}   a e^{-r u}
///            | {"kind": "constant", "value": c}
///            | {"kind": "table", "u": [...], "rho": [...]}       piecewise linear
///   "atoms": [{"u": float, "w": float}, ...] }
Measure parse_measure(std::string_view document);

/// Throws ValidationError for negative masses or atoms outside [0, U].
void validate_measure(const Measure& m);

/// int_0^U u^n density(u) du + sum_k w_k u_k^n. The quadrature node count is
/// doubled until successive results agree to 1e-12 relative; NumericalError
/// after four failed doublings.
double measure_moment(const Measure& m, std::size_t n);

/// max_{n <= n_check} |moment_n - rho_n| / rho_n
double moment_check(const Measure& m, const WeightTable& w, std::size_t n_check);

struct ProjectorMatrix {
    Eigen::MatrixXcd entries;
    double J = 0.0;
    /// +inf for the infinite-time average.
    double Gamma = 0.0;
};

/// (2 Gamma)^{-1} int_{-Gamma}^{Gamma} |J,g><J,g| dg in the basis |0>..|n_max>,
/// evaluated in closed form: entry (n, m) carries sin(Gamma d)/(Gamma d) with
/// d = e_n - e_m.
ProjectorMatrix gamma_averaged_projector(const Spectrum& s, const WeightTable& w, double J,
                                         double Gamma, std::size_t n_max,
                                         const SeriesOptions& opts = {});

/// d_n = (1/rho_n) int_0^U J^n rho(J) dJ for n <= n_check; each is 1 when the
/// measure resolves unity. Requires U = J*.
std::vector<double> unity_check(const Measure& m, const WeightTable& w, const Spectrum& s,
                                std::size_t n_check);

}  // namespace aacs
