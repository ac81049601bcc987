#pragma once

#include <cstdint>
#include <vector>

#include "varest/estimators.hpp"
#include "varest/moments.hpp"
#include "varest/rng.hpp"

namespace varest {

struct SimulationPlan {
    std::size_t n = 0;             // 2 <= n < N
    std::size_t replications = 0;  // >= 1
    std::uint64_t seed = 0;
    std::vector<EstimatorConfig> estimators;
    EvalOptions eval;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Replication summary for one estimator. Draws whose evaluation failed a
/// numeric precondition are excluded from every moment and counted in
/// failed_sample_count; when no draw survives, the moment fields are NaN.
struct EmpiricalReport {
    EstimatorConfig estimator = EstimatorConfig::unbiased();
    std::size_t replications = 0;
    std::size_t valid_samples = 0;
    double mean_estimate = 0.0;
    double empirical_bias = 0.0;   // mean - S_y^2
    double empirical_mse = 0.0;    // mean of (t - S_y^2)^2
    double stderr_of_mean = 0.0;
    std::size_t negative_estimate_count = 0;
    std::size_t failed_sample_count = 0;
};

/// Same statistics taken over the whole design: every one of the C(N,n)
/// subsets once, equally weighted. stderr_of_mean is identically zero.
struct ExactReport {
    EstimatorConfig estimator = EstimatorConfig::unbiased();
    std::uint64_t sample_space_size = 0;
    std::uint64_t valid_samples = 0;
    double mean_estimate = 0.0;
    double empirical_bias = 0.0;
    double empirical_mse = 0.0;
    double stderr_of_mean = 0.0;
    std::uint64_t negative_estimate_count = 0;
    std::uint64_t failed_sample_count = 0;
};

/// One equal-probability without-replacement draw of n distinct 1-based
/// indices from 1..N, returned sorted. Requires 2 <= n <= N.
std::vector<std::size_t> srswor_sample(std::size_t N, std::size_t n, Rng& rng);

/// C(N, n), or TooLarge once the count exceeds `cap`.
std::uint64_t subset_count(std::size_t N, std::size_t n,
                           std::uint64_t cap = ~0ull);

/// Repeated-sampling study of plan.estimators over the population. The
/// report is a pure function of (pop, plan) minus plan.threads: any thread
/// count yields byte-identical results, because each replication draws from
/// its own seed-derived substream and partial sums are combined in a fixed
/// block order.
std::vector<EmpiricalReport> simulate(const Population& pop,
                                      const SimulationPlan& plan);

/// Exact design moments by full enumeration of the C(N,n) subsets
/// (2 <= n <= N). Throws TooLarge when the subset count exceeds `limit`.
std::vector<ExactReport> enumerate_exact(const Population& pop, std::size_t n,
                                         const std::vector<EstimatorConfig>& estimators,
                                         std::uint64_t limit = 2'000'000,
                                         const EvalOptions& eval = {});

}  // namespace varest
