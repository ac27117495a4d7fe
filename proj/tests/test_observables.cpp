#include <doctest.h>

#include <cmath>
#include <vector>

#include "gen.hpp"
#include "aacs/observables.hpp"
#include "aacs/state.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace aacs;

namespace {

struct Fixture {
    Spectrum h = make_builtin(Model::hydrogen_like, 1.0);
    Spectrum osc = make_builtin(Model::harmonic, 1.0);
    WeightTable hw = compute_weights(h, kDefaultNmax);
    WeightTable ow = compute_weights(osc, 4000);
};

const Fixture& fx() {
    static const Fixture f;
    return f;
}

double bound(double J, double omega = 1.0) { return 0.75 * omega * omega * J * (1.0 - J); }

}  // namespace

TEST_CASE("energy mean examples") {
    CHECK(energy_mean(fx().h, fx().hw, 0.3) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(energy_mean(fx().osc, fx().ow, 0.3) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(energy_mean(fx().h, fx().hw, 0.0) == 0.0);
    CHECK(energy_mean(fx().osc, fx().ow, 0.0) == 0.0);
    const auto osc2 = make_builtin(Model::harmonic, 2.0);
    const auto w2 = compute_weights(osc2, 200);
    CHECK(energy_mean(osc2, w2, 1.5) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("property: action identity") {
    gen::Source src;
    for (int i = 0; i < 200; ++i) {
        const double J = src.uniform(0.0, 0.95);
        REQUIRE(std::fabs(energy_mean(fx().h, fx().hw, J) - J) <= 1e-8);
        const double K = src.uniform(0.0, 9.5);
        REQUIRE(std::fabs(energy_mean(fx().osc, fx().ow, K) - K) <= 1e-8);
    }
    const auto h3 = make_builtin(Model::hydrogen_like, 3.0);
    const auto w3 = compute_weights(h3, kDefaultNmax);
    CHECK(energy_mean(h3, w3, 0.7) / 3.0 == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("harmonic variance is Poissonian") {
    for (double J : {0.1, 0.5, 1.0, 2.0, 7.0}) {
        const auto v = variance(fx().osc, fx().ow, J);
        CHECK(v.variance == doctest::Approx(J).epsilon(1e-10));
        CHECK(std::fabs(v.variance - J) <= v.tail_bound + 1e-12 * J);
        // Independent pairwise sum over 80 terms in long double.
        const auto m = oracle::direct_moments(oracle::harmonic_level, J, 81, 0.0L);
        CHECK(static_cast<double>(oracle::double_sum_variance(oracle::harmonic_level, m.terms)) ==
              doctest::Approx(J).epsilon(1e-15));
        REQUIRE(v.double_sum_variance.has_value());
        CHECK(*v.double_sum_variance == doctest::Approx(J).epsilon(1e-10));
        CHECK(v.second_moment == doctest::Approx(J * (J + 1.0)).epsilon(1e-10));
    }
}

TEST_CASE("hydrogen variance") {
    const auto v = variance(fx().h, fx().hw, 0.5);
    CHECK(v.variance <= 0.1875);
    CHECK(v.mean == doctest::Approx(0.5).epsilon(1e-12));
    const auto m = oracle::direct_moments(oracle::hydrogen_level, 0.5L, 100000);
    CHECK(v.variance == doctest::Approx(static_cast<double>(m.variance())).epsilon(1e-10));
    CHECK(std::fabs(v.variance - (v.second_moment - v.mean * v.mean)) <= 1e-13);
}

TEST_CASE("variance at J = 0") {
    for (const auto* pair : {&fx().hw, &fx().ow}) {
        const Spectrum& s = pair == &fx().hw ? fx().h : fx().osc;
        const auto v = variance(s, *pair, 0.0);
        CHECK(v.variance == 0.0);
        CHECK(v.mean == 0.0);
        CHECK(v.terms_used == 1);
    }
}

TEST_CASE("property: variance nonnegative and routes agree") {
    gen::Source src;
    for (int i = 0; i < 60; ++i) {
        const double J = src.uniform(0.0, 0.99);
        const auto v = variance(fx().h, fx().hw, J);
        REQUIRE(v.variance >= -v.tail_bound);
        REQUIRE(v.double_sum_variance.has_value());
        REQUIRE(std::fabs(*v.double_sum_variance - v.variance) <= 1e-8 * v.variance + 1e-15);
        REQUIRE(v.variance <= bound(J) + 1e-9);
        const double K = src.uniform(0.0, 20.0);
        const auto u = variance(fx().osc, fx().ow, K);
        REQUIRE(u.variance >= -u.tail_bound);
        REQUIRE(std::fabs(*u.double_sum_variance - u.variance) <= 1e-8 * u.variance + 1e-15);
    }
}

TEST_CASE("variance is independent of gamma") {
    // Probabilities |c_n|^2 do not depend on gamma.
    const auto a = coefficients(fx().h, fx().hw, {0.6, 0.0});
    const auto b = coefficients(fx().h, fx().hw, {0.6, 7.3});
    double va = 0.0, vb = 0.0, ma = 0.0, mb = 0.0;
    for (std::size_t n = 0; n < a.c.size(); ++n) {
        const double e = fx().h.level(n);
        ma += std::norm(a.c[n]) * e;
        mb += std::norm(b.c[n]) * e;
        va += std::norm(a.c[n]) * e * e;
        vb += std::norm(b.c[n]) * e * e;
    }
    CHECK(std::fabs((va - ma * ma) - (vb - mb * mb)) <= 1e-15);
    CHECK(std::fabs((va - ma * ma) - variance(fx().h, fx().hw, 0.6).variance) <= 1e-12);
}

TEST_CASE("variance curve") {
    const std::vector<double> zero{0.0};
    const auto c0 = variance_curve(fx().h, fx().hw, zero);
    REQUIRE(c0.size() == 1);
    CHECK(c0[0].variance == 0.0);

    std::vector<double> grid;
    for (int k = 1; k <= 9; ++k) grid.push_back(0.1 * k);
    const auto ch = variance_curve(fx().h, fx().hw, grid);
    REQUIRE(ch.size() == 9);
    for (const auto& p : ch) {
        CHECK(p.error_code == 0);
        CHECK(p.variance <= bound(p.J) + 1e-12);
        CHECK(p.variance > 0.0);
    }

    const auto osc = make_builtin(Model::harmonic, 1.5);
    const auto ow = compute_weights(osc, 400);
    const std::vector<double> g2{0.5, 1.0, 2.0};
    const auto co = variance_curve(osc, ow, g2);
    for (std::size_t i = 0; i < g2.size(); ++i)
        CHECK(co[i].variance == doctest::Approx(g2[i] * 2.25).epsilon(1e-10));

    const std::vector<double> bad{0.5, 1.5, -1.0, 0.7};
    const auto cb = variance_curve(fx().h, fx().hw, bad);
    REQUIRE(cb.size() == 4);
    CHECK(cb[0].error_code == 0);
    CHECK(cb[1].error_code == 1);
    CHECK(std::isnan(cb[1].variance));
    CHECK_FALSE(cb[1].error.empty());
    CHECK(cb[2].error_code == 1);
    CHECK(cb[3].error_code == 0);

    const auto shallow = compute_weights(fx().h, 60);
    const std::vector<double> deep{0.99};
    const auto ct = variance_curve(fx().h, shallow, deep);
    CHECK(ct[0].error_code == 2);

    CHECK(variance_curve(fx().h, fx().hw, std::vector<double>{}).empty());
}

TEST_CASE("hydrogen variance bound with omega") {
    const auto h = make_builtin(Model::hydrogen_like, 2.0);
    const auto w = compute_weights(h, kDefaultNmax);
    for (double J : {0.2, 0.5, 0.8}) CHECK(variance(h, w, J).variance <= bound(J, 2.0) + 1e-9);
}

TEST_CASE("cross check is skipped for long series") {
    VarianceOptions opts;
    opts.cross_check_max_terms = 10;
    const auto v = variance(fx().h, fx().hw, 0.5, opts);
    CHECK_FALSE(v.double_sum_variance.has_value());
    opts.cross_check = false;
    opts.cross_check_max_terms = 100000;
    CHECK_FALSE(variance(fx().h, fx().hw, 0.5, opts).double_sum_variance.has_value());
}

TEST_CASE("small J slope") {
    const auto osc = small_J_slope(fx().osc, fx().ow);
    CHECK(osc.slope == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(osc.e1 == 1.0);

    const auto h = small_J_slope(fx().h, fx().hw);
    CHECK(h.slope == doctest::Approx(0.75).epsilon(1e-4));
    const auto m = oracle::direct_moments(oracle::hydrogen_level, 1e-5L, 100);
    CHECK(static_cast<double>(m.variance() / 1e-5L) == doctest::Approx(0.75).epsilon(1e-4));

    std::vector<double> levels{0.0, 2.0, 3.0, 5.0, 8.0, 12.0, 17.0, 23.0, 30.0, 38.0, 47.0, 57.0};
    const auto s = Spectrum::from_energies("custom", 1.0, levels, std::nullopt);
    const auto w = compute_weights(s, levels.size() - 1);
    CHECK(small_J_slope(s, w).slope == doctest::Approx(2.0).epsilon(1e-4));

    const auto h2 = make_builtin(Model::hydrogen_like, 4.0);
    const auto w2 = compute_weights(h2, 1000);
    CHECK(small_J_slope(h2, w2).slope == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("small J slope reports instability") {
    // e_1 tiny against e_2 makes v/J vary on the scale of the grid.
    std::vector<double> levels{0.0, 1e-4, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
    const auto s = Spectrum::from_energies("stiff", 1.0, levels, std::nullopt);
    const auto w = compute_weights(s, levels.size() - 1);
    CHECK_THROWS_AS(small_J_slope(s, w), NumericalError);
}

TEST_CASE("near J* exponent for the hydrogen-like spectrum") {
    const auto w = compute_weights(fx().h, 2'000'000);
    const auto fit = near_Jstar_exponent(fx().h, w);
    CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.1));
    CHECK(fit.gaps.size() >= 3);
    CHECK(fit.summable);
    CHECK(fit.rho_converged);
    CHECK(fit.rho_limit == doctest::Approx(0.5).epsilon(1e-6));
    REQUIRE(fit.leading_coefficient.has_value());
    CHECK(*fit.leading_coefficient == doctest::Approx(oracle::kHydrogenLeadingCoefficient).epsilon(1e-5));
    CHECK(fit.coefficient_consistent);

    // Independent points at J = 0.9, 0.99, 0.999.
    std::vector<double> xs, ys;
    for (double J : {0.9, 0.99, 0.999}) {
        const auto m = oracle::direct_moments(oracle::hydrogen_level, J, 200000);
        xs.push_back(std::log(1.0 - J));
        ys.push_back(std::log(static_cast<double>(m.variance())));
    }
    const double slope = (ys[2] - ys[0]) / (xs[2] - xs[0]);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("near J* for reciprocal gaps follows the closed form") {
    const auto s = synthetic::power_gap(1.0);
    const auto w = compute_weights(s, 200'000);
    for (double J : {0.5, 0.9, 0.99, 0.999}) {
        VarianceOptions opts;
        opts.cross_check = false;
        CHECK(variance(s, w, J, opts).variance ==
              doctest::Approx(oracle::reciprocal_gap_variance(J)).epsilon(1e-9));
    }
    // (1-J)^2 log(1/(1-J)) is steeper than linear.
    const std::vector<double> window{0.9, 0.99, 0.999, 0.9999};
    const auto fit = near_Jstar_exponent(s, w, window);
    CHECK(fit.exponent > 1.5);
    CHECK(fit.exponent < 2.0);
    CHECK_FALSE(fit.leading_coefficient.has_value());
}

TEST_CASE("near J* with vanishing weights") {
    const auto s = synthetic::power_gap(0.25);
    const auto w = compute_weights(s, 200'000);
    const std::vector<double> window{0.7, 0.8, 0.85, 0.9, 0.93};
    const auto fit = near_Jstar_exponent(s, w, window);
    CHECK(fit.gaps.size() == 5);
    // Laplace asymptotics of sum J^n / rho_n give the exponent 5.
    CHECK(fit.exponent > 4.0);
    CHECK(fit.exponent < 6.0);
    CHECK_FALSE(fit.summable);
    CHECK_FALSE(fit.leading_coefficient.has_value());
}

TEST_CASE("near J* errors") {
    CHECK_THROWS_AS(near_Jstar_exponent(fx().osc, fx().ow), RangeError);
    // The default window needs a deep table.
    CHECK_THROWS_AS(near_Jstar_exponent(fx().h, fx().hw), NumericalError);
    const std::vector<double> window{0.5, 0.6, 1.2, 0.7};
    const auto fit = near_Jstar_exponent(fx().h, fx().hw, window);
    CHECK(fit.skipped.size() == 1);
    CHECK(fit.gaps.size() == 3);

    std::vector<double> levels{0.0, 0.5, 0.9};
    const auto open = Spectrum::from_energies("open", 1.0, levels, std::nullopt);
    const auto ow = compute_weights(open, 2);
    CHECK_THROWS_AS(near_Jstar_exponent(open, ow), RangeError);

    const auto h2 = make_builtin(Model::hydrogen_like, 5.0);
    const auto w2 = compute_weights(h2, 100);
    const std::vector<double> w3{0.3, 0.4, 0.5};
    CHECK(near_Jstar_exponent(h2, w2, w3).gaps.size() == 3);
}

TEST_CASE("default fit window") {
    const auto w = default_fit_window();
    REQUIRE(w.size() == 5);
    CHECK(1.0 - w[0] == doctest::Approx(std::pow(10.0, -1.5)));
    CHECK(1.0 - w[4] == doctest::Approx(std::pow(10.0, -7.5)).epsilon(1e-6));
}
