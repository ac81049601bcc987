#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "varest/errors.hpp"
#include "varest/estimators.hpp"
#include "varest/moments.hpp"
#include "varest/montecarlo.hpp"
#include "varest/rng.hpp"
#include "test_support.hpp"

using namespace varest;
using testsupport::make_population;

namespace {

Population toy4() { return Population({1, 2, 3, 4}, {2, 4, 6, 8}); }

struct Fixture {
    Population pop = toy4();
    PopulationMoments pm = population_moments(pop, 2, false);
    SampleStats s14 = sample_stats(pop, {1, 4});       // s2_y = 4.5, s2_x = 18
    SampleStats s124 = sample_stats(pop, {1, 2, 4});   // three units
    SampleStats full = sample_stats(pop, {1, 2, 3, 4});
};

}  // namespace

TEST_CASE("unbiased estimator returns the sample variance") {
    Fixture f;
    CHECK(est_unbiased(f.s14) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(est_unbiased(f.full) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("ratio estimator on the benchmark subsample") {
    Fixture f;
    // 4.5 * (20/3) / 18 = 5/3; exact because x is proportional to y
    CHECK(est_ratio(f.s14, f.pm) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    // census sample: s2_x = S2_x, so the correction factor is 1
    CHECK(est_ratio(f.full, f.pm) == doctest::Approx(f.full.s2_y).epsilon(1e-14));
}

TEST_CASE("ratio estimator rejects a constant-x sample") {
    const Population pop({1, 2, 3, 4}, {9, 9, 9, 2});
    const PopulationMoments pm = population_moments(pop, 3, false);
    const SampleStats st = sample_stats(pop, {1, 2, 3});
    CHECK_THROWS_AS(est_ratio(st, pm), ZeroDenominator);
}

TEST_CASE("regression estimator matches the ratio form under proportionality") {
    Fixture f;
    // with x = 2y exactly, the plug-in slope collapses to s2_y/s2_x and the
    // regression and ratio corrections coincide
    const double reg = est_regression(f.s124, f.pm);
    const double rat = est_ratio(f.s124, f.pm);
    CHECK(reg == doctest::Approx(5.0 / 3.0).epsilon(1e-13));
    CHECK(reg == doctest::Approx(rat).epsilon(1e-13));
    CHECK(std::abs(reg - rat) / rat < 0.05);
    // census sample: no correction
    CHECK(est_regression(f.full, f.pm) == doctest::Approx(f.full.s2_y).epsilon(1e-14));
}

TEST_CASE("regression estimator degenerates on two-point samples") {
    Fixture f;
    // any n = 2 sample has lambda04_hat = 1 exactly
    CHECK_THROWS_AS(est_regression(f.s14, f.pm), DegenerateRegression);
}

TEST_CASE("regression estimator with the census slope works at n = 2") {
    Fixture f;
    const double b =
        f.pm.lambda22_star * f.pm.s2_y / (f.pm.beta2x_star * f.pm.s2_x);
    const double expect = f.s14.s2_y + b * (f.pm.s2_x - f.s14.s2_x);
    CHECK(est_regression(f.s14, f.pm, true) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("shrinkage-ratio estimator hand value and reductions") {
    Fixture f;
    // a=1, b=1, alpha=1/2: numerator 20/3-1 = 17/3, denominator
    // (17 + 17/3)/2 = 34/3, so t = 4.5/2
    CHECK(est_khosh(f.s14, f.pm, {1.0, 1.0, 0.5}) ==
          doctest::Approx(2.25).epsilon(1e-14));
    // alpha = 0 collapses the denominator onto the numerator
    CHECK(est_khosh(f.s14, f.pm, {1.0, 1.0, 0.0}) ==
          doctest::Approx(4.5).epsilon(1e-15));
    // a=1, b=0, alpha=1 is the plain ratio form
    CHECK(est_khosh(f.s14, f.pm, {1.0, 0.0, 1.0}) ==
          doctest::Approx(est_ratio(f.s14, f.pm)).epsilon(1e-14));
}

TEST_CASE("shrinkage-ratio estimator sees the vanishing denominator") {
    Fixture f;
    // s2_x = 18 exactly, so a=1, b=18, alpha=1 zeroes the denominator
    CHECK_THROWS_AS(est_khosh(f.s14, f.pm, {1.0, 18.0, 1.0}), ZeroDenominator);
}

TEST_CASE("power-transform estimator values and domain") {
    Fixture f;
    // w=1 on the benchmark subsample: 4.5 (2 - 2.7) = -3.15
    CHECK(est_sahai_ray(f.s14, f.pm, {1.0}) == doctest::Approx(-3.15).epsilon(1e-14));
    CHECK(est_sahai_ray(f.s14, f.pm, {0.0}) == doctest::Approx(4.5).epsilon(1e-15));
    // census sample: the base is exactly 1 for every w
    CHECK(est_sahai_ray(f.full, f.pm, {0.37}) ==
          doctest::Approx(f.full.s2_y).epsilon(1e-14));

    const Population pop({1, 2, 3, 4}, {9, 9, 9, 2});
    const PopulationMoments pm = population_moments(pop, 3, false);
    const SampleStats st = sample_stats(pop, {1, 2, 3});  // s2_x = 0
    CHECK_THROWS_AS(est_sahai_ray(st, pm, {0.5}), DomainError);
    CHECK_THROWS_AS(est_sahai_ray(st, pm, {-1.0}), DomainError);
    CHECK(est_sahai_ray(st, pm, {1.0}) == doctest::Approx(2.0 * st.s2_y));
}

TEST_CASE("generalized estimator reduces to the unbiased form") {
    Fixture f;
    GeneralizedParams p;  // a=0, c=1, d=0, alpha1=1, alpha=1, beta=1
    p.beta = 0.0;
    p.alpha = 0.7;
    p.c = 2.0;
    p.d = 3.0;
    CHECK(est_generalized(f.s14, f.pm, p) == doctest::Approx(4.5).epsilon(1e-15));
}

TEST_CASE("generalized estimator reduces to the ratio form") {
    Fixture f;
    const GeneralizedParams p{0.0, 1.0, 0.0, 1.0, 1.0, 1.0};
    CHECK(est_generalized(f.s14, f.pm, p) ==
          doctest::Approx(est_ratio(f.s14, f.pm)).epsilon(1e-13));
}

TEST_CASE("generalized estimator reduces to the product form") {
    Fixture f;
    const GeneralizedParams p{0.0, 1.0, 0.0, 1.0, 1.0, -1.0};
    // s2_y s2_x / S2_x = 4.5 * 18 / (20/3) = 12.15
    CHECK(est_generalized(f.s14, f.pm, p) == doctest::Approx(12.15).epsilon(1e-13));
}

TEST_CASE("generalized estimator reduces to the mixed-denominator form") {
    Fixture f;
    const GeneralizedParams g{0.0, 1.0, 0.0, 1.0, 0.3, 1.0};
    const KhoshParams k{1.0, 0.0, 0.3};
    CHECK(est_generalized(f.s14, f.pm, g) ==
          doctest::Approx(est_khosh(f.s14, f.pm, k)).epsilon(1e-13));
}

TEST_CASE("generalized reductions hold on random draws") {
    Rng rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const Population pop = make_population(rng, 9 + rep % 14);
        const PopulationMoments pm = population_moments(pop, 3, false);
        const SampleStats st = sample_stats(pop, srswor_sample(pop.size(), 4, rng));

        CHECK(est_generalized(st, pm, {0.0, 1.0, 0.0, 1.0, 1.0, 0.0}) ==
              doctest::Approx(est_unbiased(st)).epsilon(1e-12));
        CHECK(est_generalized(st, pm, {0.0, 1.0, 0.0, 1.0, 1.0, 1.0}) ==
              doctest::Approx(est_ratio(st, pm)).epsilon(1e-12));
        const double product = st.s2_y * (st.s2_x / pm.s2_x);
        CHECK(est_generalized(st, pm, {0.0, 1.0, 0.0, 1.0, 1.0, -1.0}) ==
              doctest::Approx(product).epsilon(1e-12));
    }
}

TEST_CASE("generalized estimator error taxonomy") {
    Fixture f;
    GeneralizedParams p;
    p.c = 1.0;
    p.d = -1.0;
    CHECK_THROWS_AS(est_generalized(f.s14, f.pm, p), InvalidArgument);

    // constant-x sample with alpha=1, c=1, d=0: denominator is s2_x = 0
    const Population pop({1, 2, 3, 4}, {9, 9, 9, 2});
    const PopulationMoments pm = population_moments(pop, 3, false);
    const SampleStats st = sample_stats(pop, {1, 2, 3});
    CHECK_THROWS_AS(est_generalized(st, pm, {0.0, 1.0, 0.0, 1.0, 1.0, 1.0}),
                    ZeroDenominator);

    // negative base with non-integer beta
    const SampleStats s12 = sample_stats(f.pop, {1, 2});  // s2_x = 2
    GeneralizedParams q{0.0, 1.0, 0.0, 1.0, 2.0, 0.5};
    CHECK_THROWS_AS(est_generalized(s12, f.pm, q), DomainError);
    q.beta = 2.0;  // integral exponent keeps the negative base legal
    CHECK_NOTHROW(est_generalized(s12, f.pm, q));
}

TEST_CASE("generalized estimator is continuous in each constant") {
    Fixture f;
    const GeneralizedParams base{0.5, 1.2, 0.4, 0.9, 0.8, 1.3};
    const double at = est_generalized(f.s124, f.pm, base);
    auto bump = [&](int which, double eps) {
        GeneralizedParams p = base;
        switch (which) {
            case 0: p.a += eps; break;
            case 1: p.c += eps; break;
            case 2: p.d += eps; break;
            case 3: p.alpha1 += eps; break;
            case 4: p.alpha += eps; break;
            case 5: p.beta += eps; break;
        }
        return std::abs(est_generalized(f.s124, f.pm, p) - at);
    };
    for (int which = 0; which < 6; ++which) {
        const double coarse = bump(which, 1e-3);
        const double fine = bump(which, 1e-7);
        CHECK(fine < 1e-3);
        CHECK(fine <= coarse + 1e-12);
    }
}

TEST_CASE("evaluate flags negatives and applies clamping") {
    Fixture f;
    const auto cfg = EstimatorConfig::sahai_ray({1.0});
    const Estimate raw = evaluate(cfg, f.s14, f.pm);
    CHECK(raw.value == doctest::Approx(-3.15).epsilon(1e-14));
    CHECK(raw.negative);

    EvalOptions opts;
    opts.clamp_nonnegative = true;
    const Estimate clamped = evaluate(cfg, f.s14, f.pm, opts);
    CHECK(clamped.value == 0.0);
    CHECK(clamped.negative);  // still reported
}

TEST_CASE("evaluate marks draws outside the expansion's reach") {
    Fixture f;
    const auto cfg =
        EstimatorConfig::generalized({0.0, 1.0, 0.0, 1.0, 1.0, 1.0});
    // A = 1 and e1 = 18/(20/3) - 1 = 1.7, so |A e1| >= 1
    const Estimate wide = evaluate(cfg, f.s14, f.pm);
    CHECK(wide.expansion_suspect);
    // census sample: e1 = 0
    const Estimate tight = evaluate(cfg, f.full, f.pm);
    CHECK_FALSE(tight.expansion_suspect);
}

TEST_CASE("evaluate_nothrow mirrors the throwing taxonomy") {
    Fixture f;
    Estimate out;
    CHECK(evaluate_nothrow(EstimatorConfig::regression(), f.s14, f.pm, {}, out) ==
          EvalStatus::DegenerateRegression);
    CHECK(evaluate_nothrow(EstimatorConfig::khosh({1.0, 18.0, 1.0}), f.s14, f.pm, {},
                           out) == EvalStatus::ZeroDenominator);
    CHECK(evaluate_nothrow(EstimatorConfig::unbiased(), f.s14, f.pm, {}, out) ==
          EvalStatus::Ok);
    CHECK(out.value == doctest::Approx(4.5));
}
