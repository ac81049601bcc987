#include "varest/theory.hpp"

#include <cmath>

#include "varest/errors.hpp"

namespace varest {

namespace {

// gamma = a S_x^2 / (a S_x^2 - b), the curvature constant of the
// shrinkage-ratio form.
double khosh_gamma(const PopulationMoments& pm, const KhoshParams& p) {
    const double num = p.a * pm.s2_x;
    const double den = num - p.b;
    if (den == 0.0)
        throw ZeroDenominator("shrinkage-ratio constants give a S_x^2 = b");
    return num / den;
}

}  // namespace

double theoretical_bias(const EstimatorConfig& cfg, const PopulationMoments& pm,
                        const TheoryOptions& opts) {
    switch (cfg.kind()) {
        case EstimatorKind::Unbiased:
        case EstimatorKind::Regression:
            return 0.0;
        case EstimatorKind::Ratio:
            return pm.theta * pm.s2_y * (pm.beta2x_star - pm.lambda22_star);
        case EstimatorKind::Khosh: {
            const auto& p = cfg.khosh_params();
            const double g = khosh_gamma(pm, p);
            const double ag = p.alpha * g;
            const double core =
                pm.s2_y * (ag * ag * pm.beta2x_star - ag * pm.lambda22_star);
            return opts.paper_literal ? core : pm.theta * core;
        }
        case EstimatorKind::SahaiRay: {
            const double w = cfg.sahai_params().w;
            return pm.s2_y * pm.theta *
                   (0.5 * w * (w - 1.0) * pm.beta2x_star - w * pm.lambda22_star);
        }
        case EstimatorKind::Generalized: {
            const auto& p = cfg.generalized_params();
            const GeneralizedDerived gd = generalized_derived(p, pm);
            const double su2 = pm.s2_y + p.a;
            return (p.alpha1 - 1.0) * su2 +
                   gd.B * p.alpha1 * su2 * pm.theta * pm.beta2x_star -
                   p.beta * gd.A * pm.s2_y * p.alpha1 * pm.theta * pm.lambda22_star;
        }
    }
    throw InvalidArgument("unknown estimator kind");
}

double theoretical_mse(const EstimatorConfig& cfg, const PopulationMoments& pm) {
    const double S4 = pm.s2_y * pm.s2_y;
    switch (cfg.kind()) {
        case EstimatorKind::Unbiased:
            return pm.theta * S4 * pm.beta2y_star;
        case EstimatorKind::Ratio:
            return pm.theta * S4 *
                   (pm.beta2y_star + pm.beta2x_star - 2.0 * pm.lambda22_star);
        case EstimatorKind::Regression: {
            if (pm.beta2y_star <= 0.0 || pm.beta2x_star <= 0.0)
                throw ZeroDenominator(
                    "regression MSE needs positive starred kurtosis ratios");
            const double frac = (pm.lambda22_star * pm.lambda22_star) /
                                (pm.beta2y_star * pm.beta2x_star);
            return pm.theta * S4 * pm.beta2y_star * (1.0 - frac);
        }
        case EstimatorKind::Khosh: {
            const auto& p = cfg.khosh_params();
            const double ag = p.alpha * khosh_gamma(pm, p);
            return pm.theta * S4 *
                   (pm.beta2y_star + ag * ag * pm.beta2x_star -
                    2.0 * ag * pm.lambda22_star);
        }
        case EstimatorKind::SahaiRay: {
            const double w = cfg.sahai_params().w;
            return pm.theta * S4 *
                   (pm.beta2y_star + w * w * pm.beta2x_star -
                    2.0 * w * pm.lambda22_star);
        }
        case EstimatorKind::Generalized: {
            const auto& p = cfg.generalized_params();
            const GeneralizedDerived gd = generalized_derived(p, pm);
            const double su2 = pm.s2_y + p.a;
            const double U = su2 * su2;
            const double shift = p.alpha1 - 1.0;
            return shift * shift * U + p.alpha1 * p.alpha1 * gd.Q1 -
                   2.0 * p.alpha1 * gd.Q2;
        }
    }
    throw InvalidArgument("unknown estimator kind");
}

GeneralizedDerived generalized_derived(const GeneralizedParams& p,
                                       const PopulationMoments& pm) {
    const double cd = p.c + p.d;
    if (cd == 0.0)
        throw InvalidArgument("generalized estimator requires c + d != 0");

    GeneralizedDerived gd;
    gd.A = p.alpha * p.c / cd;
    gd.B = 0.5 * p.beta * (p.beta + 1.0) * gd.A * gd.A;

    const double su2 = pm.s2_y + p.a;
    const double U = su2 * su2;
    const double S4 = pm.s2_y * pm.s2_y;
    const double bA = p.beta * gd.A;

    gd.Q1 = pm.theta *
            (S4 * pm.beta2y_star +
             pm.beta2x_star * (bA * bA * U + 2.0 * gd.B * U) -
             4.0 * bA * pm.s2_y * su2 * pm.lambda22_star);
    gd.Q2 = pm.theta * (gd.B * U * pm.beta2x_star -
                        pm.s2_y * su2 * bA * pm.lambda22_star);

    const double den = gd.Q1 + U;
    if (den == 0.0)
        throw ZeroDenominator("generalized optimum: Q1 + (S_y^2 + a)^2 = 0");
    gd.alpha1_opt = (gd.Q2 + U) / den;
    return gd;
}

KhoshParams optimal_khosh(const PopulationMoments& pm, KhoshParams fixed) {
    const double g = khosh_gamma(pm, fixed);
    if (g == 0.0)
        throw ZeroDenominator("shrinkage-ratio optimum undefined for a = 0");
    if (pm.beta2x_star == 0.0)
        throw ZeroDenominator("shrinkage-ratio optimum needs beta2x_star != 0");
    fixed.alpha = pm.lambda22_star / (g * pm.beta2x_star);
    return fixed;
}

SahaiParams optimal_sahai(const PopulationMoments& pm) {
    if (pm.beta2x_star == 0.0)
        throw ZeroDenominator("power-transform optimum needs beta2x_star != 0");
    return SahaiParams{pm.lambda22_star / pm.beta2x_star};
}

GeneralizedParams optimal_generalized(const PopulationMoments& pm,
                                      GeneralizedParams fixed) {
    fixed.alpha1 = generalized_derived(fixed, pm).alpha1_opt;
    return fixed;
}

EstimatorConfig optimal_params(const EstimatorConfig& cfg,
                               const PopulationMoments& pm) {
    switch (cfg.kind()) {
        case EstimatorKind::Khosh:
            return EstimatorConfig::khosh(optimal_khosh(pm, cfg.khosh_params()));
        case EstimatorKind::SahaiRay:
            return EstimatorConfig::sahai_ray(optimal_sahai(pm));
        case EstimatorKind::Generalized:
            return EstimatorConfig::generalized(
                optimal_generalized(pm, cfg.generalized_params()));
        default:
            return cfg;
    }
}

double pre(double mse_reference, double mse_candidate) {
    if (!(mse_candidate > 0.0))
        throw ZeroDenominator("relative efficiency needs a positive candidate MSE");
    return 100.0 * mse_reference / mse_candidate;
}

namespace {

double require_c_x(const PopulationMoments& pm) {
    if (!pm.c_x)
        throw InvalidArgument(
            "benchmark preset needs the auxiliary coefficient of variation");
    return *pm.c_x;
}

}  // namespace

GeneralizedParams generalized_preset_cx(const PopulationMoments& pm) {
    GeneralizedParams p;
    p.a = require_c_x(pm);
    p.c = p.a;
    p.d = 0.9742;
    p.alpha1 = 1.0;
    p.alpha = 1.0;
    p.beta = 1.0;
    return p;
}

GeneralizedParams generalized_preset_bx(const PopulationMoments& pm) {
    GeneralizedParams p;
    p.a = require_c_x(pm);
    p.c = 1.0;
    p.d = 0.9742;
    p.alpha1 = 1.0;
    p.alpha = 1.0;
    p.beta = 1.0;
    return p;
}

KhoshParams khosh_preset() { return KhoshParams{1.0, 1.0, 1.0}; }

}  // namespace varest
