#include "aacs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace aacs {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<long double, long double> legendre(std::size_t n, long double x) {
    long double p0 = 1.0L, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const long double dp = n * (x * p1 - p0) / (x * x - 1.0L);
    return {p1, dp};
}

// L_n(x), L_n'(x) and L_{n+1}(x).
struct LaguerreValues {
    long double value, derivative, next;
};

LaguerreValues laguerre(std::size_t n, long double x) {
    long double l0 = 1.0L, l1 = 1.0L - x;
    for (std::size_t k = 1; k < n; ++k) {
        const long double l2 = ((2.0L * k + 1.0L - x) * l1 - k * l0) / (k + 1.0L);
        l0 = l1;
        l1 = l2;
    }
    // l1 = L_n, l0 = L_{n-1}
    const long double next = ((2.0L * n + 1.0L - x) * l1 - n * l0) / (n + 1.0L);
    const long double derivative = n * (l1 - l0) / x;
    return {l1, derivative, next};
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("quadrature needs at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double dp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, d] = legendre(n, x);
            dp = d;
            const long double dx = p / d;
            x -= dx;
            if (std::fabs(dx) < 1e-19L) break;
        }
        dp = legendre(n, x).second;
        const long double wgt = 2.0L / ((1.0L - x * x) * dp * dp);
        rule.nodes[i] = static_cast<double>(-x);
        rule.nodes[n - 1 - i] = static_cast<double>(x);
        rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(wgt);
    }
    return rule;
}

QuadratureRule gauss_laguerre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("quadrature needs at least one node");
    // Golub-Welsch eigenvalues as starting points, polished by Newton.
    Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 * i + 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) sub[i] = i + 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double x = solver.eigenvalues()[i];
        for (int iter = 0; iter < 20; ++iter) {
            const auto v = laguerre(n, x);
            const long double dx = v.value / v.derivative;
            x -= dx;
            if (std::fabs(dx) < 1e-19L * (1.0L + x)) break;
        }
        const auto v = laguerre(n, x);
        const long double denom = (n + 1.0L) * v.next;
        rule.nodes[i] = static_cast<double>(x);
        rule.weights[i] = static_cast<double>(x / (denom * denom));
    }
    return rule;
}

}  // namespace aacs
