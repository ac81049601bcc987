#pragma once

#include "varest/estimators.hpp"
#include "varest/moments.hpp"

namespace varest {

struct TheoryOptions {
    /// Reproduce the shrinkage-ratio bias exactly as printed in the source
    /// table, i.e. without the leading theta factor. Off by default: the
    /// default carries theta like every other first-order bias here.
    bool paper_literal = false;
};

/// Intermediate quantities of the generalized estimator's first-order
/// expansion. A is the relative weight alpha c/(c+d) of the sample term in
/// the mixed denominator; B = beta(beta+1)A^2/2 is the second-order series
/// coefficient of (1 + A e)^-beta.
struct GeneralizedDerived {
    double A = 0.0;
    double B = 0.0;
    double Q1 = 0.0;
    double Q2 = 0.0;
    double alpha1_opt = 0.0;
};

/// One row of a theory comparison: first-order bias, first-order MSE, and
/// percent relative efficiency against the unbiased estimator.
struct TheoryReport {
    EstimatorConfig estimator = EstimatorConfig::unbiased();
    double bias = 0.0;
    double mse = 0.0;
    double pre = 0.0;
};

/// First-order design bias of the estimator at pm's theta.
double theoretical_bias(const EstimatorConfig& cfg, const PopulationMoments& pm,
                        const TheoryOptions& opts = {});

/// First-order design MSE of the estimator at pm's theta.
double theoretical_mse(const EstimatorConfig& cfg, const PopulationMoments& pm);

GeneralizedDerived generalized_derived(const GeneralizedParams& p,
                                       const PopulationMoments& pm);

/// MSE-minimizing constants, holding the remaining ones fixed:
/// alpha for the shrinkage-ratio form, w for the power-transform form,
/// alpha1 for the generalized form.
KhoshParams optimal_khosh(const PopulationMoments& pm, KhoshParams fixed);
SahaiParams optimal_sahai(const PopulationMoments& pm);
GeneralizedParams optimal_generalized(const PopulationMoments& pm,
                                      GeneralizedParams fixed);

/// Replaces the tunable constant of cfg's kind with its closed-form optimum;
/// parameter-free estimators pass through unchanged.
EstimatorConfig optimal_params(const EstimatorConfig& cfg,
                               const PopulationMoments& pm);

/// Percent relative efficiency, 100 * reference / candidate. Throws
/// ZeroDenominator unless the candidate MSE is positive.
double pre(double mse_reference, double mse_candidate);

/// Benchmark configurations of the generalized estimator: beta = 1,
/// alpha = 1, a = C_x, d = 0.9742, differing in the reading of the third
/// constant (c = C_x, or c left at its ratio-reduction value 1). alpha1 is
/// left at 1; pass through optimal_generalized to pin it.
GeneralizedParams generalized_preset_cx(const PopulationMoments& pm);
GeneralizedParams generalized_preset_bx(const PopulationMoments& pm);

/// Benchmark constants of the shrinkage-ratio estimator (a = b = 1); alpha
/// is left at 1, to be pinned via optimal_khosh.
KhoshParams khosh_preset();

}  // namespace varest
