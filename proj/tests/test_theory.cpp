#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "varest/errors.hpp"
#include "varest/estimators.hpp"
#include "varest/moments.hpp"
#include "varest/rng.hpp"
#include "varest/theory.hpp"
#include "test_support.hpp"

using namespace varest;
using testsupport::make_population;

namespace {

// The classical apple orchard summary (N = 104, n = 20), keyed in by hand so
// this file does not depend on the loaders under test elsewhere.
PopulationMoments benchmark_pm() {
    PopulationMoments pm;
    pm.N = 104;
    pm.n = 20;
    pm.fpc = false;
    pm.theta = 0.05;
    pm.s2_y = 11.6694 * 11.6694;
    pm.s2_x = 23029.072 * 23029.072;
    pm.c_y = 1.866;
    pm.c_x = 1.653;
    pm.rho_yx = 0.865;
    pm.lambda40 = 16.523;
    pm.lambda04 = 17.516;
    pm.lambda22 = 14.398;
    pm.beta2y_star = pm.lambda40 - 1.0;
    pm.beta2x_star = pm.lambda04 - 1.0;
    pm.lambda22_star = pm.lambda22 - 1.0;
    pm.c_yx = 2.668;
    return pm;
}

PopulationMoments random_pm(Rng& rng, std::size_t N, std::size_t n) {
    return population_moments(make_population(rng, N), n, false);
}

}  // namespace

TEST_CASE("benchmark first-order MSE values") {
    const PopulationMoments pm = benchmark_pm();
    const double mse_unb = theoretical_mse(EstimatorConfig::unbiased(), pm);
    const double mse_rat = theoretical_mse(EstimatorConfig::ratio(), pm);
    const double mse_reg = theoretical_mse(EstimatorConfig::regression(), pm);

    // published to seven significant digits; stay within 0.1 percent
    CHECK(mse_unb == doctest::Approx(14395.4).epsilon(1e-3));
    CHECK(mse_rat == doctest::Approx(4862.145).epsilon(1e-3));
    CHECK(mse_reg == doctest::Approx(4316.267).epsilon(1e-3));

    const auto khosh_opt = optimal_khosh(pm, khosh_preset());
    CHECK(theoretical_mse(EstimatorConfig::khosh(khosh_opt), pm) ==
          doctest::Approx(4316.267).epsilon(1e-3));
    CHECK(theoretical_mse(EstimatorConfig::sahai_ray(optimal_sahai(pm)), pm) ==
          doctest::Approx(4316.267).epsilon(1e-3));

    const auto gen_opt = optimal_generalized(pm, generalized_preset_cx(pm));
    CHECK(theoretical_mse(EstimatorConfig::generalized(gen_opt), pm) ==
          doctest::Approx(4316.258).epsilon(1e-3));
}

TEST_CASE("benchmark first-order bias values") {
    const PopulationMoments pm = benchmark_pm();
    CHECK(theoretical_bias(EstimatorConfig::unbiased(), pm) == 0.0);
    CHECK(theoretical_bias(EstimatorConfig::regression(), pm) == 0.0);
    // theta S_y^2 (16.516 - 13.398)
    CHECK(theoretical_bias(EstimatorConfig::ratio(), pm) ==
          doctest::Approx(21.22967).epsilon(1e-5));
    // w = 1 zeroes the quadratic term, leaving -theta S_y^2 lambda22_star
    CHECK(theoretical_bias(EstimatorConfig::sahai_ray({1.0}), pm) ==
          doctest::Approx(-91.223563).epsilon(1e-6));
    // at the optimal alpha the first-order bias of the shrinkage form vanishes
    const auto opt = optimal_khosh(pm, khosh_preset());
    CHECK(theoretical_bias(EstimatorConfig::khosh(opt), pm) ==
          doctest::Approx(0.0).scale(pm.s2_y));
}

TEST_CASE("shrinkage-ratio bias carries theta unless asked not to") {
    const PopulationMoments pm = benchmark_pm();
    const auto cfg = EstimatorConfig::khosh({1.0, 1.0, 0.6});
    TheoryOptions literal;
    literal.paper_literal = true;
    const double with_theta = theoretical_bias(cfg, pm);
    const double bare = theoretical_bias(cfg, pm, literal);
    CHECK(with_theta == doctest::Approx(pm.theta * bare).epsilon(1e-14));
    CHECK(std::abs(bare) > std::abs(with_theta));
}

TEST_CASE("benchmark optimal constants") {
    const PopulationMoments pm = benchmark_pm();
    CHECK(optimal_sahai(pm).w == doctest::Approx(13.398 / 16.516).epsilon(1e-12));
    CHECK(optimal_sahai(pm).w == doctest::Approx(0.81121).epsilon(1e-4));

    const GeneralizedParams preset = generalized_preset_cx(pm);
    CHECK(preset.a == doctest::Approx(1.653));
    CHECK(preset.c == doctest::Approx(1.653));
    CHECK(preset.d == doctest::Approx(0.9742));
    const GeneralizedDerived gd = generalized_derived(preset, pm);
    CHECK(gd.A == doctest::Approx(1.653 / (1.653 + 0.9742)).epsilon(1e-12));
    CHECK(gd.A == doctest::Approx(0.62919).epsilon(1e-4));
    CHECK(gd.alpha1_opt == doctest::Approx(0.8488).epsilon(5e-4));

    const GeneralizedParams bx = generalized_preset_bx(pm);
    CHECK(bx.c == 1.0);
    CHECK(bx.a == doctest::Approx(1.653));
}

TEST_CASE("ratio bias is exactly zero when the deviations coincide") {
    // x = y + 5 gives identical centered values, so lambda04 == lambda22
    const Population pop({1, 2, 3, 4}, {6, 7, 8, 9});
    const PopulationMoments pm = population_moments(pop, 2, false);
    CHECK(theoretical_bias(EstimatorConfig::ratio(), pm) == 0.0);
    CHECK(theoretical_mse(EstimatorConfig::ratio(), pm) ==
          doctest::Approx(theoretical_mse(EstimatorConfig::regression(), pm))
              .epsilon(1e-12));
}

TEST_CASE("generalized expansion agrees with its reductions") {
    Rng rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        const PopulationMoments pm = random_pm(rng, 12 + rep % 9, 4);

        // beta = 0: the transform is flat, so the unbiased theory applies
        const GeneralizedParams flat{0.0, 1.0, 0.5, 1.0, 0.8, 0.0};
        CHECK(theoretical_bias(EstimatorConfig::generalized(flat), pm) ==
              doctest::Approx(0.0).scale(1.0));
        CHECK(theoretical_mse(EstimatorConfig::generalized(flat), pm) ==
              doctest::Approx(theoretical_mse(EstimatorConfig::unbiased(), pm))
                  .epsilon(1e-12));

        // a=0, c=1, d=0, alpha1=alpha=beta=1: the ratio theory applies
        const GeneralizedParams rat{0.0, 1.0, 0.0, 1.0, 1.0, 1.0};
        CHECK(theoretical_bias(EstimatorConfig::generalized(rat), pm) ==
              doctest::Approx(theoretical_bias(EstimatorConfig::ratio(), pm))
                  .epsilon(1e-12));
        CHECK(theoretical_mse(EstimatorConfig::generalized(rat), pm) ==
              doctest::Approx(theoretical_mse(EstimatorConfig::ratio(), pm))
                  .epsilon(1e-12));
    }
}

TEST_CASE("optimal shrinkage and power constants recover the regression MSE") {
    Rng rng(11);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t N = 8 + rep % 17;
        const PopulationMoments pm = random_pm(rng, N, 2 + rep % (N - 2));
        const double target = theoretical_mse(EstimatorConfig::regression(), pm);

        // any (a, b) with a S_x^2 != b leads back to the same optimum
        const double a = 0.25 + 2.0 * testsupport::uniform01(rng);
        const double b = testsupport::uniform01(rng) * pm.s2_x * 0.5;
        const auto k = optimal_khosh(pm, {a, b, 1.0});
        CHECK(theoretical_mse(EstimatorConfig::khosh(k), pm) ==
              doctest::Approx(target).epsilon(1e-9));

        const auto s = optimal_sahai(pm);
        CHECK(theoretical_mse(EstimatorConfig::sahai_ray(s), pm) ==
              doctest::Approx(target).epsilon(1e-9));
    }
}

TEST_CASE("closed-form optima beat a fine grid") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const PopulationMoments pm = random_pm(rng, 24, 6);

        const auto k = optimal_khosh(pm, khosh_preset());
        const double mse_k = theoretical_mse(EstimatorConfig::khosh(k), pm);
        const auto s = optimal_sahai(pm);
        const double mse_s =
            theoretical_mse(EstimatorConfig::sahai_ray(s), pm);
        const auto g = optimal_generalized(pm, generalized_preset_cx(pm));
        const double mse_g =
            theoretical_mse(EstimatorConfig::generalized(g), pm);

        const double tol = 1e-9;
        for (int i = 0; i <= 200; ++i) {
            const double off = -1.0 + i / 100.0;
            KhoshParams kp = k;
            kp.alpha += off;
            CHECK(theoretical_mse(EstimatorConfig::khosh(kp), pm) >=
                  mse_k - tol * std::abs(mse_k));
            SahaiParams sp{s.w + off};
            CHECK(theoretical_mse(EstimatorConfig::sahai_ray(sp), pm) >=
                  mse_s - tol * std::abs(mse_s));
            GeneralizedParams gp = g;
            gp.alpha1 += off;
            CHECK(theoretical_mse(EstimatorConfig::generalized(gp), pm) >=
                  mse_g - tol * std::abs(mse_g));
        }
    }
}

TEST_CASE("first-order MSE scales linearly in theta without the correction") {
    Rng rng(23);
    const Population pop = make_population(rng, 60);
    const PopulationMoments half = population_moments(pop, 10, false);
    const PopulationMoments full = population_moments(pop, 20, false);

    std::vector<EstimatorConfig> cfgs = {
        EstimatorConfig::unbiased(), EstimatorConfig::ratio(),
        EstimatorConfig::regression(),
        EstimatorConfig::khosh({1.0, 1.0, 0.4}),
        EstimatorConfig::sahai_ray({0.7}),
        // alpha1 = 1 keeps the generalized MSE proportional to theta
        EstimatorConfig::generalized({0.0, 1.0, 0.5, 1.0, 0.9, 1.0})};
    for (const auto& cfg : cfgs) {
        CHECK(theoretical_mse(cfg, half) ==
              doctest::Approx(2.0 * theoretical_mse(cfg, full)).epsilon(1e-12));
    }
}

TEST_CASE("regression MSE is never negative") {
    Rng rng(29);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t N = 6 + rep % 30;
        const PopulationMoments pm = random_pm(rng, N, 3);
        CHECK(theoretical_mse(EstimatorConfig::regression(), pm) >= 0.0);
    }
}

TEST_CASE("relative efficiency examples") {
    CHECK(pre(5.0, 5.0) == 100.0);
    CHECK(pre(8.0, 4.0) == 200.0);
    CHECK(pre(14395.4, 4862.145) == doctest::Approx(296.071).epsilon(1e-5));
    CHECK_THROWS_AS(pre(1.0, 0.0), ZeroDenominator);
    CHECK_THROWS_AS(pre(1.0, -2.0), ZeroDenominator);
}

TEST_CASE("optimal_params dispatch") {
    const PopulationMoments pm = benchmark_pm();
    const auto unb = optimal_params(EstimatorConfig::unbiased(), pm);
    CHECK(unb.kind() == EstimatorKind::Unbiased);

    const auto k = optimal_params(EstimatorConfig::khosh(khosh_preset()), pm);
    CHECK(k.khosh_params().alpha ==
          doctest::Approx(optimal_khosh(pm, khosh_preset()).alpha));

    const auto s = optimal_params(EstimatorConfig::sahai_ray({1.0}), pm);
    CHECK(s.sahai_params().w == doctest::Approx(optimal_sahai(pm).w));

    const auto g = optimal_params(
        EstimatorConfig::generalized(generalized_preset_cx(pm)), pm);
    CHECK(g.generalized_params().alpha1 ==
          doctest::Approx(generalized_derived(generalized_preset_cx(pm), pm)
                              .alpha1_opt));
}

TEST_CASE("degenerate theory inputs are rejected") {
    PopulationMoments pm = benchmark_pm();
    // a S_x^2 == b makes gamma blow up
    CHECK_THROWS_AS(optimal_khosh(pm, {1.0, pm.s2_x, 0.5}), ZeroDenominator);
    pm.beta2x_star = 0.0;
    CHECK_THROWS_AS(optimal_sahai(pm), ZeroDenominator);
    CHECK_THROWS_AS(optimal_khosh(pm, khosh_preset()), ZeroDenominator);

    PopulationMoments no_cx = benchmark_pm();
    no_cx.c_x.reset();
    CHECK_THROWS_AS(generalized_preset_cx(no_cx), InvalidArgument);
    CHECK_THROWS_AS(generalized_preset_bx(no_cx), InvalidArgument);
}
