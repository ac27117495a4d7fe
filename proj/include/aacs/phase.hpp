#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace aacs {

/// exp(-i * level * angle). Products beyond 1e8 in magnitude are reduced
/// modulo 2*pi in extended precision before the trig call.
inline std::complex<double> unit_phase(double level, double angle) {
    constexpr long double kLarge = 1e8L;
    constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;
    const long double arg = static_cast<long double>(level) * static_cast<long double>(angle);
    double a;
    if (std::fabs(arg) <= kLarge)
        a = static_cast<double>(arg);
    else
        a = static_cast<double>(std::fmod(arg, kTwoPi));
    // + 0.0 turns the -0 of -sin(0) into +0.
    return {std::cos(a), -std::sin(a) + 0.0};
}

}  // namespace aacs
