#pragma once

#include <string>
#include <variant>

#include "varest/moments.hpp"

namespace varest {

/// Constants of the transformed generalized estimator
///   t = alpha1 (s_y^2 + a) [ S_v^2 / (alpha s_v^2 + (1-alpha) S_v^2) ]^beta - a
/// with s_v^2 = c s_x^2 + d S_x^2 and S_v^2 = (c+d) S_x^2. Requires c+d != 0.
struct GeneralizedParams {
    double a = 0.0;
    double c = 1.0;
    double d = 0.0;
    double alpha1 = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
};

/// Constants of the shrinkage-ratio estimator
///   t_k = s_y^2 (a S_x^2 - b) / (alpha (a s_x^2 - b) + (1-alpha)(a S_x^2 - b)).
struct KhoshParams {
    double a = 1.0;
    double b = 1.0;
    double alpha = 1.0;
};

/// Constant of the power-transform estimator t_s = s_y^2 (2 - (s_x^2/S_x^2)^w).
struct SahaiParams {
    double w = 1.0;
};

enum class EstimatorKind { Unbiased, Ratio, Regression, Khosh, SahaiRay, Generalized };

/// Tagged estimator choice plus its constants. Construct through the
/// factories so the parameter payload always matches the kind.
class EstimatorConfig {
public:
    static EstimatorConfig unbiased() { return EstimatorConfig(EstimatorKind::Unbiased); }
    static EstimatorConfig ratio() { return EstimatorConfig(EstimatorKind::Ratio); }
    static EstimatorConfig regression() { return EstimatorConfig(EstimatorKind::Regression); }
    static EstimatorConfig khosh(const KhoshParams& p) {
        EstimatorConfig c(EstimatorKind::Khosh);
        c.params_ = p;
        return c;
    }
    static EstimatorConfig sahai_ray(const SahaiParams& p) {
        EstimatorConfig c(EstimatorKind::SahaiRay);
        c.params_ = p;
        return c;
    }
    static EstimatorConfig generalized(const GeneralizedParams& p) {
        EstimatorConfig c(EstimatorKind::Generalized);
        c.params_ = p;
        return c;
    }

    EstimatorKind kind() const noexcept { return kind_; }
    const KhoshParams& khosh_params() const { return std::get<KhoshParams>(params_); }
    const SahaiParams& sahai_params() const { return std::get<SahaiParams>(params_); }
    const GeneralizedParams& generalized_params() const {
        return std::get<GeneralizedParams>(params_);
    }

    /// Stable row label used by reports: "unbiased", "ratio", "regression",
    /// "khosh", "sahai_ray", "generalized".
    std::string name() const;

private:
    explicit EstimatorConfig(EstimatorKind k) : kind_(k) {}

    EstimatorKind kind_;
    std::variant<std::monostate, KhoshParams, SahaiParams, GeneralizedParams> params_;
};

/// s_y^2 itself; design-unbiased for S_y^2 under equal-probability
/// without-replacement sampling.
double est_unbiased(const SampleStats& s);

/// s_y^2 S_x^2 / s_x^2. Throws ZeroDenominator when s_x^2 = 0.
double est_ratio(const SampleStats& s, const PopulationMoments& pm);

/// s_y^2 + b (S_x^2 - s_x^2). By default b is the plug-in sample slope
/// (lambda22_hat - 1) s_y^2 / ((lambda04_hat - 1) s_x^2); with
/// `population_coef` it is the census slope built from pm's starred ratios.
/// Throws DegenerateRegression when the slope denominator vanishes.
double est_regression(const SampleStats& s, const PopulationMoments& pm,
                      bool population_coef = false);

double est_khosh(const SampleStats& s, const PopulationMoments& pm,
                 const KhoshParams& p);

double est_sahai_ray(const SampleStats& s, const PopulationMoments& pm,
                     const SahaiParams& p);

double est_generalized(const SampleStats& s, const PopulationMoments& pm,
                       const GeneralizedParams& p);

struct EvalOptions {
    bool clamp_nonnegative = false;        // replace negative estimates with 0
    bool population_regression_coef = false;
};

/// Estimate plus per-sample diagnostics. `negative` reflects the raw value
/// before any clamping. `expansion_suspect` marks generalized-estimator
/// draws where |A e_1| >= 1 and the first-order series behind the theory
/// module does not converge; the point estimate itself is still exact.
struct Estimate {
    double value = 0.0;
    bool negative = false;
    bool expansion_suspect = false;
};

enum class EvalStatus { Ok, ZeroDenominator, DegenerateRegression, DomainError };

/// Non-throwing evaluation for tight loops. Returns a status instead of
/// raising; `out` is valid only for EvalStatus::Ok.
EvalStatus evaluate_nothrow(const EstimatorConfig& cfg, const SampleStats& s,
                            const PopulationMoments& pm, const EvalOptions& opts,
                            Estimate& out) noexcept;

/// Throwing wrapper over evaluate_nothrow with the same semantics as the
/// individual est_* functions.
Estimate evaluate(const EstimatorConfig& cfg, const SampleStats& s,
                  const PopulationMoments& pm, const EvalOptions& opts = {});

}  // namespace varest
