#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace varest {

/// A finite bivariate population: study variate y and auxiliary variate x.
/// Unit indices are 1-based everywhere in the public API (units U_1..U_N).
class Population {
public:
    /// Validates: equal lengths, at least two units, all values finite.
    Population(std::vector<double> y, std::vector<double> x);

    std::size_t size() const noexcept { return y_.size(); }
    const std::vector<double>& y() const noexcept { return y_; }
    const std::vector<double>& x() const noexcept { return x_; }

private:
    std::vector<double> y_;
    std::vector<double> x_;
};

/// Census-level moment summary. Variances use the N-1 divisor, central
/// moment ratios the 1/N divisor. theta is the leading design factor:
/// 1/n by default, 1/n - 1/N when the finite population correction is on.
struct PopulationMoments {
    std::size_t N = 0;
    std::size_t n = 0;
    bool fpc = false;
    double theta = 0.0;

    std::optional<double> mean_y;  // absent when built from a summary file
    std::optional<double> mean_x;
    double s2_y = 0.0;
    double s2_x = 0.0;
    std::optional<double> c_y;  // sqrt(S2_y)/mean_y, absent when mean is 0/unknown
    std::optional<double> c_x;
    double rho_yx = 0.0;

    double lambda40 = 0.0;  // kurtosis ratio of y
    double lambda04 = 0.0;  // kurtosis ratio of x
    double lambda22 = 0.0;

    double beta2y_star = 0.0;    // lambda40 - 1
    double beta2x_star = 0.0;    // lambda04 - 1
    double lambda22_star = 0.0;  // lambda22 - 1

    std::optional<double> c_yx;  // summary-file passthrough; no formula consumes it
};

/// Moments of one drawn sample. Variances use the n-1 divisor; the lambda
/// ratios use 1/n central moments and are absent when their denominator
/// vanishes (a constant variate within the sample). On a two-point sample
/// they are set to their identical value of 1 exactly.
struct SampleStats {
    std::size_t n = 0;
    double s2_y = 0.0;
    double s2_x = 0.0;
    std::optional<double> lambda22_hat;
    std::optional<double> lambda04_hat;
};

/// lambda_pq = mu_pq / (mu_20^{p/2} mu_02^{q/2}) with 1/N central moments.
/// Requires p+q even and >= 2 (InvalidOrder) and a nondegenerate variate on
/// each side that appears with positive order (DegenerateVariate).
double central_moment_ratio(const Population& pop, unsigned p, unsigned q);

/// Full census summary for a prospective sample size n (2 <= n <= N).
PopulationMoments population_moments(const Population& pop, std::size_t n,
                                     bool use_fpc = false);

/// Sample moments for the 1-based units listed in `indices`. Throws
/// TooSmall for fewer than two units, BadIndex on range or duplicates.
SampleStats sample_stats(const Population& pop,
                         const std::vector<std::size_t>& indices);

namespace detail {

/// Hot-path variant: no validation, no allocation. `idx` holds n distinct
/// 1-based unit indices.
SampleStats sample_stats_indexed(const Population& pop, const std::size_t* idx,
                                 std::size_t n) noexcept;

}  // namespace detail

}  // namespace varest
