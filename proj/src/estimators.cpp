#include "varest/estimators.hpp"

#include <cmath>

#include "varest/errors.hpp"

namespace varest {

namespace {

struct Scored {
    EvalStatus status = EvalStatus::Ok;
    double value = 0.0;
};

Scored ratio_core(const SampleStats& s, const PopulationMoments& pm) noexcept {
    if (s.s2_x == 0.0) return {EvalStatus::ZeroDenominator, 0.0};
    return {EvalStatus::Ok, s.s2_y * (pm.s2_x / s.s2_x)};
}

Scored regression_core(const SampleStats& s, const PopulationMoments& pm,
                       bool population_coef) noexcept {
    double b;
    if (population_coef) {
        const double denom = pm.beta2x_star * pm.s2_x;
        if (denom == 0.0) return {EvalStatus::DegenerateRegression, 0.0};
        b = pm.lambda22_star * pm.s2_y / denom;
    } else {
        if (!s.lambda04_hat || !s.lambda22_hat)
            return {EvalStatus::DegenerateRegression, 0.0};
        const double denom = (*s.lambda04_hat - 1.0) * s.s2_x;
        if (denom == 0.0) return {EvalStatus::DegenerateRegression, 0.0};
        b = (*s.lambda22_hat - 1.0) * s.s2_y / denom;
    }
    return {EvalStatus::Ok, s.s2_y + b * (pm.s2_x - s.s2_x)};
}

Scored khosh_core(const SampleStats& s, const PopulationMoments& pm,
                  const KhoshParams& p) noexcept {
    const double num = p.a * pm.s2_x - p.b;
    const double denom =
        p.alpha * (p.a * s.s2_x - p.b) + (1.0 - p.alpha) * num;
    if (denom == 0.0) return {EvalStatus::ZeroDenominator, 0.0};
    return {EvalStatus::Ok, s.s2_y * (num / denom)};
}

Scored sahai_core(const SampleStats& s, const PopulationMoments& pm,
                  const SahaiParams& p) noexcept {
    const double r = s.s2_x / pm.s2_x;
    const bool integral = std::isfinite(p.w) && p.w == std::floor(p.w);
    if (integral) {
        if (r == 0.0 && p.w < 0.0) return {EvalStatus::DomainError, 0.0};
    } else {
        if (r <= 0.0) return {EvalStatus::DomainError, 0.0};
    }
    return {EvalStatus::Ok, s.s2_y * (2.0 - std::pow(r, p.w))};
}

Scored generalized_core(const SampleStats& s, const PopulationMoments& pm,
                        const GeneralizedParams& p) noexcept {
    // c + d != 0 is a configuration invariant, checked by the callers.
    const double su2 = s.s2_y + p.a;
    const double sv2 = p.c * s.s2_x + p.d * pm.s2_x;
    const double Sv2 = (p.c + p.d) * pm.s2_x;
    const double denom = p.alpha * sv2 + (1.0 - p.alpha) * Sv2;
    if (denom == 0.0) return {EvalStatus::ZeroDenominator, 0.0};
    const double base = Sv2 / denom;

    double bracket;
    if (p.beta == 0.0) {
        bracket = 1.0;
    } else if (p.beta == 1.0) {
        bracket = base;
    } else if (p.beta == -1.0) {
        if (base == 0.0) return {EvalStatus::ZeroDenominator, 0.0};
        bracket = 1.0 / base;
    } else if (std::isfinite(p.beta) && p.beta == std::floor(p.beta)) {
        if (base == 0.0 && p.beta < 0.0) return {EvalStatus::ZeroDenominator, 0.0};
        bracket = std::pow(base, p.beta);
    } else {
        if (base <= 0.0) return {EvalStatus::DomainError, 0.0};
        bracket = std::pow(base, p.beta);
    }
    return {EvalStatus::Ok, p.alpha1 * su2 * bracket - p.a};
}

[[noreturn]] void raise(EvalStatus st, const char* what) {
    switch (st) {
        case EvalStatus::ZeroDenominator:
            throw ZeroDenominator(what);
        case EvalStatus::DegenerateRegression:
            throw DegenerateRegression(what);
        case EvalStatus::DomainError:
            throw DomainError(what);
        case EvalStatus::Ok:
            break;
    }
    throw NumericError(what);
}

double unwrap(const Scored& r, const char* what) {
    if (r.status != EvalStatus::Ok) raise(r.status, what);
    return r.value;
}

void check_generalized_config(const GeneralizedParams& p) {
    if (p.c + p.d == 0.0)
        throw InvalidArgument("generalized estimator requires c + d != 0");
}

}  // namespace

std::string EstimatorConfig::name() const {
    switch (kind_) {
        case EstimatorKind::Unbiased: return "unbiased";
        case EstimatorKind::Ratio: return "ratio";
        case EstimatorKind::Regression: return "regression";
        case EstimatorKind::Khosh: return "khosh";
        case EstimatorKind::SahaiRay: return "sahai_ray";
        case EstimatorKind::Generalized: return "generalized";
    }
    return "unknown";
}

double est_unbiased(const SampleStats& s) { return s.s2_y; }

double est_ratio(const SampleStats& s, const PopulationMoments& pm) {
    return unwrap(ratio_core(s, pm), "ratio estimator: sample x variance is zero");
}

double est_regression(const SampleStats& s, const PopulationMoments& pm,
                      bool population_coef) {
    return unwrap(regression_core(s, pm, population_coef),
                  "regression estimator: slope denominator vanishes");
}

double est_khosh(const SampleStats& s, const PopulationMoments& pm,
                 const KhoshParams& p) {
    return unwrap(khosh_core(s, pm, p),
                  "shrinkage-ratio estimator: mixed denominator vanishes");
}

double est_sahai_ray(const SampleStats& s, const PopulationMoments& pm,
                     const SahaiParams& p) {
    return unwrap(sahai_core(s, pm, p),
                  "power-transform estimator: nonpositive base with non-integer w");
}

double est_generalized(const SampleStats& s, const PopulationMoments& pm,
                       const GeneralizedParams& p) {
    check_generalized_config(p);
    return unwrap(generalized_core(s, pm, p), "generalized estimator failed");
}

EvalStatus evaluate_nothrow(const EstimatorConfig& cfg, const SampleStats& s,
                            const PopulationMoments& pm, const EvalOptions& opts,
                            Estimate& out) noexcept {
    Scored r;
    out = Estimate{};
    switch (cfg.kind()) {
        case EstimatorKind::Unbiased:
            r = {EvalStatus::Ok, s.s2_y};
            break;
        case EstimatorKind::Ratio:
            r = ratio_core(s, pm);
            break;
        case EstimatorKind::Regression:
            r = regression_core(s, pm, opts.population_regression_coef);
            break;
        case EstimatorKind::Khosh:
            r = khosh_core(s, pm, cfg.khosh_params());
            break;
        case EstimatorKind::SahaiRay:
            r = sahai_core(s, pm, cfg.sahai_params());
            break;
        case EstimatorKind::Generalized: {
            const auto& p = cfg.generalized_params();
            r = generalized_core(s, pm, p);
            if (r.status == EvalStatus::Ok) {
                const double A = p.alpha * p.c / (p.c + p.d);
                const double e1 = s.s2_x / pm.s2_x - 1.0;
                if (std::abs(A * e1) >= 1.0) out.expansion_suspect = true;
            }
            break;
        }
    }
    if (r.status != EvalStatus::Ok) return r.status;
    out.value = r.value;
    out.negative = r.value < 0.0;
    if (opts.clamp_nonnegative && out.value < 0.0) out.value = 0.0;
    return EvalStatus::Ok;
}

Estimate evaluate(const EstimatorConfig& cfg, const SampleStats& s,
                  const PopulationMoments& pm, const EvalOptions& opts) {
    if (cfg.kind() == EstimatorKind::Generalized)
        check_generalized_config(cfg.generalized_params());
    Estimate out;
    const EvalStatus st = evaluate_nothrow(cfg, s, pm, opts, out);
    if (st != EvalStatus::Ok) raise(st, "estimator evaluation failed");
    return out;
}

}  // namespace varest
