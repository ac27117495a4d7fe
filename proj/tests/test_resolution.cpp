#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "gen.hpp"
#include "aacs/quadrature.hpp"
#include "aacs/resolution.hpp"
#include "oracles.hpp"

using namespace aacs;

namespace {

struct Fixture {
    Spectrum h = make_builtin(Model::hydrogen_like, 1.0);
    Spectrum osc = make_builtin(Model::harmonic, 1.0);
    WeightTable hw = compute_weights(h, 2000);
    WeightTable ow = compute_weights(osc, 200);
};

const Fixture& fx() {
    static const Fixture f;
    return f;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    for (std::size_t n : {1, 2, 5, 16, 64, 256}) {
        const auto r = gauss_legendre(n);
        REQUIRE(r.nodes.size() == n);
        for (std::size_t k = 0; k < std::min<std::size_t>(2 * n, 40); ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], double(k));
            const double exact = k % 2 ? 0.0 : 2.0 / double(k + 1);
            REQUIRE(std::fabs(s - exact) <= 1e-14);
        }
    }
}

TEST_CASE("Gauss-Laguerre reproduces factorials") {
    for (std::size_t n : {4, 16, 32, 64}) {
        const auto r = gauss_laguerre(n);
        REQUIRE(r.nodes.size() == n);
        for (std::size_t k = 0; k < std::min<std::size_t>(2 * n, 25); ++k) {
            long double s = 0.0L;
            for (std::size_t i = 0; i < n; ++i)
                s += static_cast<long double>(r.weights[i]) *
                     std::pow(static_cast<long double>(r.nodes[i]), static_cast<long double>(k));
            const long double f = std::tgamma(static_cast<long double>(k) + 1.0L);
            REQUIRE(std::fabs(s / f - 1.0L) <= 1e-12L);
        }
    }
}

TEST_CASE("builtin measure moments") {
    const auto mh = builtin_measure(Model::harmonic);
    for (std::size_t n = 0; n <= 20; ++n)
        REQUIRE(measure_moment(mh, n) == doctest::Approx(std::tgamma(double(n) + 1.0)).epsilon(1e-12));
    const auto mk = builtin_measure(Model::hydrogen_like);
    for (std::size_t n = 0; n <= 50; ++n) {
        const double analytic = 0.5 / double(n + 1) + 0.5;
        REQUIRE(analytic == doctest::Approx(static_cast<double>(oracle::hydrogen_rho(n))).epsilon(1e-15));
        REQUIRE(fx().hw.rho(n) == doctest::Approx(analytic).epsilon(1e-13));
        REQUIRE(measure_moment(mk, n) == doctest::Approx(analytic).epsilon(1e-13));
    }
    CHECK(measure_moment(mh, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(measure_moment(mk, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("moment check") {
    CHECK(moment_check(builtin_measure(Model::harmonic), fx().ow, 15) <= 1e-9);
    CHECK(moment_check(builtin_measure(Model::hydrogen_like), fx().hw, 30) <= 1e-10);
    const auto wrong = parse_measure(R"({"U":1,"density":{"kind":"constant","value":1}})");
    double err = 0.0;
    CHECK_NOTHROW(err = moment_check(wrong, fx().ow, 15));
    CHECK(err > 0.5);
    CHECK_THROWS_AS(moment_check(wrong, fx().ow, 201), RangeError);
}

TEST_CASE("unity check") {
    const auto dh = unity_check(builtin_measure(Model::hydrogen_like), fx().hw, fx().h, 30);
    REQUIRE(dh.size() == 31);
    for (double d : dh) CHECK(std::fabs(d - 1.0) <= 1e-10);
    const auto dk = unity_check(builtin_measure(Model::harmonic), fx().ow, fx().osc, 15);
    for (double d : dk) CHECK(std::fabs(d - 1.0) <= 1e-9);
    CHECK(dk[0] == doctest::Approx(1.0).epsilon(1e-14));

    // Upper limit must equal J*.
    CHECK_THROWS_AS(unity_check(builtin_measure(Model::hydrogen_like), fx().ow, fx().osc, 5),
                    ValidationError);
    CHECK_THROWS_AS(unity_check(builtin_measure(Model::harmonic), fx().hw, fx().h, 5),
                    ValidationError);
    CHECK_THROWS_AS(unity_check(builtin_measure(Model::harmonic), fx().hw, fx().osc, 5),
                    ValidationError);
}

TEST_CASE("measure documents") {
    const auto e = parse_measure(R"({"U":"inf","density":{"kind":"exponential","scale":2,"rate":2}})");
    CHECK(e.hint == QuadratureHint::semi_infinite_exponential);
    // int u^n 2 e^{-2u} = n! / 2^n
    CHECK(measure_moment(e, 3) == doctest::Approx(6.0 / 8.0).epsilon(1e-12));

    const auto c = parse_measure(
        R"({"U":1,"density":{"kind":"constant","value":0.5},"atoms":[{"u":1,"w":0.5}]})");
    REQUIRE(c.atoms.size() == 1);
    CHECK(measure_moment(c, 4) == doctest::Approx(0.5 / 5.0 + 0.5).epsilon(1e-13));

    // Triangle on [0,2] peaked at 1: int u^n = (2^{n+2} - 2) / ((n+1)(n+2)).
    const auto t = parse_measure(R"({"U":2,"density":{"kind":"table","u":[0,1,2],"rho":[0,1,0]}})");
    CHECK(t.breakpoints.size() == 1);
    for (std::size_t n : {0, 1, 5}) {
        const double exact = (std::pow(2.0, double(n) + 2.0) - 2.0) / double((n + 1) * (n + 2));
        CHECK(measure_moment(t, n) == doctest::Approx(exact).epsilon(1e-12));
    }

    const auto f = parse_measure(R"({"U":3,"density":{"kind":"exponential","scale":1,"rate":1}})");
    CHECK(measure_moment(f, 0) == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-13));
}

TEST_CASE("measure document errors") {
    CHECK_THROWS_AS(parse_measure("[1,2"), ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"U":1})"), ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"U":"big","density":{"kind":"constant","value":1}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"U":1,"density":{"kind":"constant","value":-1}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"U":1,"density":{"kind":"cubic"}})"), ValidationError);
    CHECK_THROWS_AS(
        parse_measure(R"({"U":1,"density":{"kind":"constant","value":1},"atoms":[{"u":2,"w":1}]})"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_measure(R"({"U":1,"density":{"kind":"constant","value":1},"atoms":[{"u":0.5,"w":0}]})"),
        ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"U":"inf","density":{"kind":"constant","value":1}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"U":2,"density":{"kind":"table","u":[0,1],"rho":[1,1]}})"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_measure(R"({"U":2,"density":{"kind":"table","u":[0,1,2],"rho":[1,-1,1]}})"),
        ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"U":0,"density":{"kind":"constant","value":1}})"),
                    ValidationError);
}

TEST_CASE("quadrature nonconvergence") {
    Measure m;
    m.upper = 1.0;
    m.density = [](double u) { return std::sqrt(u); };
    CHECK_THROWS_AS(measure_moment(m, 0), NumericalError);

    Measure neg;
    neg.upper = 1.0;
    neg.density = [](double u) { return u - 0.5; };
    CHECK_THROWS_AS(measure_moment(neg, 0), ValidationError);
}

TEST_CASE("projector at infinite Gamma is diagonal") {
    const double inf = std::numeric_limits<double>::infinity();
    for (double J : {0.0, 0.3, 0.8}) {
        const auto P = gamma_averaged_projector(fx().h, fx().hw, J, inf, 40);
        const double N = J == 0.0 ? 1.0 : static_cast<double>(oracle::hydrogen_normalization(J));
        for (int n = 0; n <= 40; ++n)
            for (int m = 0; m <= 40; ++m) {
                if (n == m) {
                    const double ref = std::pow(J, n) / (static_cast<double>(oracle::hydrogen_rho(n)) * N);
                    REQUIRE(P.entries(n, n).real() == doctest::Approx(ref).epsilon(1e-12));
                } else {
                    REQUIRE(P.entries(n, m) == std::complex<double>{});
                }
            }
    }
    const auto full = gamma_averaged_projector(fx().osc, fx().ow, 2.0, inf, 200);
    CHECK(std::fabs(full.entries.trace().real() - 1.0) <= 1e-10);
    const auto hfull = gamma_averaged_projector(fx().h, fx().hw, 0.5, inf, 200);
    CHECK(std::fabs(hfull.entries.trace().real() - 1.0) <= 1e-10);
}

TEST_CASE("projector off-diagonal bound") {
    const auto P = gamma_averaged_projector(fx().h, fx().hw, 0.5, 1e3, 30);
    double worst = 0.0, min_gap = 1.0, diag_product_max = 0.0;
    for (int n = 0; n <= 30; ++n)
        for (int m = 0; m <= 30; ++m) {
            if (n == m) continue;
            const double d = std::fabs(fx().h.level(n) - fx().h.level(m));
            const double gm = std::sqrt(P.entries(n, n).real() * P.entries(m, m).real());
            // Entry-wise form of the bound.
            REQUIRE(std::abs(P.entries(n, m)) <= gm / (1e3 * d) * (1.0 + 1e-12));
            worst = std::max(worst, std::abs(P.entries(n, m)));
            min_gap = std::min(min_gap, d);
            diag_product_max = std::max(diag_product_max, gm);
        }
    CHECK(worst <= diag_product_max / (1e3 * min_gap));
}

TEST_CASE("harmonic projector at Gamma = pi") {
    const auto P = gamma_averaged_projector(fx().osc, fx().ow, 1.5, std::numbers::pi, 25);
    for (int n = 0; n <= 25; ++n)
        for (int m = 0; m <= 25; ++m)
            if (n != m) REQUIRE(P.entries(n, m) == std::complex<double>{});
}

TEST_CASE("property: projector is Hermitian and positive semidefinite") {
    gen::Source src;
    for (int i = 0; i < 30; ++i) {
        const bool hyd = i % 2 == 0;
        const auto& s = hyd ? fx().h : fx().osc;
        const auto& w = hyd ? fx().hw : fx().ow;
        const double J = hyd ? src.uniform(0.0, 0.95) : src.uniform(0.0, 6.0);
        const double Gamma = std::pow(10.0, src.uniform(-1.0, 4.0));
        const auto P = gamma_averaged_projector(s, w, J, Gamma, 30);
        REQUIRE((P.entries - P.entries.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        for (int n = 0; n <= 30; ++n) {
            REQUIRE(P.entries(n, n).imag() == 0.0);
            REQUIRE(P.entries(n, n).real() >= 0.0);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(P.entries);
        REQUIRE(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("off-diagonal decay with Gamma") {
    double prev = 0.0;
    for (double Gamma : {1e2, 1e3, 1e4}) {
        const auto P = gamma_averaged_projector(fx().h, fx().hw, 0.5, Gamma, 30);
        double worst = 0.0;
        for (int n = 0; n <= 30; ++n)
            for (int m = 0; m <= 30; ++m)
                if (n != m) worst = std::max(worst, std::abs(P.entries(n, m)));
        if (prev > 0.0) CHECK(prev / worst >= 8.0);
        prev = worst;
    }
}

TEST_CASE("projector errors") {
    CHECK_THROWS_AS(gamma_averaged_projector(fx().h, fx().hw, 0.5, 0.0, 10), RangeError);
    CHECK_THROWS_AS(gamma_averaged_projector(fx().h, fx().hw, 0.5, 1.0, 5000), RangeError);
    CHECK_THROWS_AS(gamma_averaged_projector(fx().h, fx().hw, 1.5, 1.0, 10), RangeError);
}
