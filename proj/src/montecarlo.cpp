#include "varest/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "varest/errors.hpp"

namespace varest {

namespace {

constexpr std::size_t kBlock = 8192;

// Neumaier-compensated sum. Order of additions is fixed by the caller, so
// results do not depend on thread count.
struct CompSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) noexcept {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const noexcept { return sum + comp; }
};

struct Acc {
    CompSum d;   // sum of (t - S_y^2)
    CompSum d2;  // sum of (t - S_y^2)^2
    std::uint64_t valid = 0;
    std::uint64_t negative = 0;
    std::uint64_t failed = 0;

    void take(const Estimate& e, double s2y) noexcept {
        const double dev = e.value - s2y;
        d.add(dev);
        d2.add(dev * dev);
        ++valid;
        if (e.negative) ++negative;
    }
};

void validate_configs(const std::vector<EstimatorConfig>& estimators) {
    for (const auto& cfg : estimators) {
        if (cfg.kind() == EstimatorKind::Generalized &&
            cfg.generalized_params().c + cfg.generalized_params().d == 0.0)
            throw InvalidArgument("generalized estimator requires c + d != 0");
    }
}

// Draw n distinct 1-based indices into idx[0..n) via partial Fisher-Yates
// over a scratch permutation. The scratch is re-seeded with iota on every
// call so the draw depends only on rng, never on earlier draws.
void draw_indices(std::size_t N, std::size_t n, Rng& rng,
                  std::vector<std::size_t>& scratch, std::size_t* idx) noexcept {
    std::iota(scratch.begin(), scratch.end(), std::size_t{1});
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(N - i));
        std::swap(scratch[i], scratch[j]);
        idx[i] = scratch[i];
    }
}

}  // namespace

std::vector<std::size_t> srswor_sample(std::size_t N, std::size_t n, Rng& rng) {
    if (n < 2 || n > N)
        throw InvalidSize("sample size must satisfy 2 <= n <= N");
    std::vector<std::size_t> scratch(N);
    std::vector<std::size_t> out(n);
    draw_indices(N, n, rng, scratch, out.data());
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t subset_count(std::size_t N, std::size_t n, std::uint64_t cap) {
    if (n > N) throw InvalidSize("subset size exceeds population size");
    const std::size_t k = std::min(n, N - n);
    unsigned __int128 c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // exact at every step: c equals C(N-k+i, i) after this line
        c = c * static_cast<unsigned __int128>(N - k + i) / i;
        if (c > cap)
            throw TooLarge("subset space exceeds limit of " + std::to_string(cap));
    }
    return static_cast<std::uint64_t>(c);
}

std::vector<EmpiricalReport> simulate(const Population& pop,
                                      const SimulationPlan& plan) {
    const std::size_t N = pop.size();
    if (plan.n < 2 || plan.n >= N)
        throw InvalidSize("simulation needs 2 <= n < N");
    if (plan.replications < 1)
        throw InvalidSize("simulation needs at least one replication");
    validate_configs(plan.estimators);

    const PopulationMoments pm = population_moments(pop, plan.n, true);
    const double s2y = pm.s2_y;
    const std::size_t reps = plan.replications;
    const std::size_t n_est = plan.estimators.size();
    const std::size_t n_blocks = (reps + kBlock - 1) / kBlock;

    // One accumulator row per block; merged in block order afterwards, so
    // the result is independent of which worker filled which block.
    std::vector<Acc> block_accs(n_blocks * n_est);

    std::atomic<std::size_t> next_block{0};
    std::atomic<bool> aborted{false};

    auto worker = [&]() {
        std::vector<std::size_t> scratch(N);
        std::vector<std::size_t> idx(plan.n);
        Estimate est;
        for (;;) {
            const std::size_t b = next_block.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks || aborted.load(std::memory_order_relaxed)) break;
            Acc* accs = &block_accs[b * n_est];
            const std::size_t lo = b * kBlock;
            const std::size_t hi = std::min(reps, lo + kBlock);
            for (std::size_t r = lo; r < hi; ++r) {
                Rng rng(substream_seed(plan.seed, r));
                draw_indices(N, plan.n, rng, scratch, idx.data());
                const SampleStats st =
                    detail::sample_stats_indexed(pop, idx.data(), plan.n);
                for (std::size_t e = 0; e < n_est; ++e) {
                    const EvalStatus status = evaluate_nothrow(
                        plan.estimators[e], st, pm, plan.eval, est);
                    if (status == EvalStatus::Ok)
                        accs[e].take(est, s2y);
                    else
                        ++accs[e].failed;
                }
            }
        }
    };

    unsigned threads =
        plan.threads ? plan.threads : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    threads = std::min<unsigned>(threads, 64);
    threads =
        static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        std::mutex mtx;
        std::exception_ptr first_error;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                try {
                    worker();
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(mtx);
                    if (!first_error) first_error = std::current_exception();
                    aborted.store(true, std::memory_order_relaxed);
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<EmpiricalReport> reports;
    reports.reserve(n_est);
    for (std::size_t e = 0; e < n_est; ++e) {
        Acc total;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            const Acc& a = block_accs[b * n_est + e];
            total.d.add(a.d.value());
            total.d2.add(a.d2.value());
            total.valid += a.valid;
            total.negative += a.negative;
            total.failed += a.failed;
        }
        EmpiricalReport rep;
        rep.estimator = plan.estimators[e];
        rep.replications = reps;
        rep.valid_samples = total.valid;
        rep.negative_estimate_count = total.negative;
        rep.failed_sample_count = total.failed;
        if (total.valid == 0) {
            rep.mean_estimate = rep.empirical_bias = rep.empirical_mse =
                rep.stderr_of_mean = nan;
        } else {
            const auto v = static_cast<double>(total.valid);
            const double sum_d = total.d.value();
            const double sum_d2 = total.d2.value();
            rep.empirical_bias = sum_d / v;
            rep.mean_estimate = s2y + rep.empirical_bias;
            rep.empirical_mse = sum_d2 / v;
            if (total.valid > 1) {
                const double ss = std::max(
                    0.0, sum_d2 - v * rep.empirical_bias * rep.empirical_bias);
                rep.stderr_of_mean = std::sqrt(ss / (v - 1.0) / v);
            } else {
                rep.stderr_of_mean = nan;
            }
        }
        reports.push_back(rep);
    }
    return reports;
}

std::vector<ExactReport> enumerate_exact(const Population& pop, std::size_t n,
                                         const std::vector<EstimatorConfig>& estimators,
                                         std::uint64_t limit,
                                         const EvalOptions& eval) {
    const std::size_t N = pop.size();
    if (n < 2 || n > N) throw InvalidSize("enumeration needs 2 <= n <= N");
    validate_configs(estimators);
    const std::uint64_t space = subset_count(N, n, limit);

    const PopulationMoments pm = population_moments(pop, n, true);
    const double s2y = pm.s2_y;
    const std::size_t n_est = estimators.size();
    std::vector<Acc> accs(n_est);

    std::vector<std::size_t> comb(n);
    std::iota(comb.begin(), comb.end(), std::size_t{1});
    Estimate est;
    bool more = true;
    while (more) {
        const SampleStats st = detail::sample_stats_indexed(pop, comb.data(), n);
        for (std::size_t e = 0; e < n_est; ++e) {
            const EvalStatus status =
                evaluate_nothrow(estimators[e], st, pm, eval, est);
            if (status == EvalStatus::Ok)
                accs[e].take(est, s2y);
            else
                ++accs[e].failed;
        }

        // advance to the next lexicographic combination
        more = false;
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (comb[i] != N - (n - 1 - i)) {
                ++comb[i];
                for (std::size_t j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
                more = true;
                break;
            }
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<ExactReport> reports;
    reports.reserve(n_est);
    for (std::size_t e = 0; e < n_est; ++e) {
        const Acc& a = accs[e];
        ExactReport rep;
        rep.estimator = estimators[e];
        rep.sample_space_size = space;
        rep.valid_samples = a.valid;
        rep.negative_estimate_count = a.negative;
        rep.failed_sample_count = a.failed;
        if (a.valid == 0) {
            rep.mean_estimate = rep.empirical_bias = rep.empirical_mse = nan;
            rep.stderr_of_mean = nan;
        } else {
            const auto v = static_cast<double>(a.valid);
            rep.empirical_bias = a.d.value() / v;
            rep.mean_estimate = s2y + rep.empirical_bias;
            rep.empirical_mse = a.d2.value() / v;
            rep.stderr_of_mean = 0.0;
        }
        reports.push_back(rep);
    }
    return reports;
}

}  // namespace varest
