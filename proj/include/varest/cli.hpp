#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varest/estimators.hpp"
#include "varest/io.hpp"
#include "varest/montecarlo.hpp"
#include "varest/theory.hpp"

namespace varest::cli {

enum class OutputFormat { Table, Csv, Json };

/// Which reading of the published benchmark constants parameterizes the
/// generalized row: c = C_x (default) or c = 1.
enum class GeneralizedReading { Cx, Bx };

/// Shared command configuration. Exactly one of data_path/params_path must
/// be set; commands that need unit-level data reject summary input with
/// ModeError.
struct RunConfig {
    std::string data_path;
    std::string params_path;
    std::optional<std::size_t> n;
    bool use_fpc = false;
    OutputFormat format = OutputFormat::Table;
    GeneralizedReading reading = GeneralizedReading::Cx;
    bool paper_literal = false;
    bool clamp_nonnegative = false;
};

/// The input resolved against a RunConfig: always a moment summary, plus
/// the population itself when unit-level data was given.
struct LoadedInput {
    std::optional<Population> pop;
    PopulationMoments pm;
};

LoadedInput load_input(const RunConfig& cfg);

/// The standard six-row estimator battery: unbiased, ratio, regression,
/// shrinkage-ratio at its optimal alpha, power-transform at its optimal w,
/// and the generalized benchmark preset at its optimal alpha1.
std::vector<EstimatorConfig> default_estimators(const PopulationMoments& pm,
                                                GeneralizedReading reading);

struct TheoryTable {
    PopulationMoments pm;
    std::vector<TheoryReport> rows;
};

TheoryTable cmd_theory_table(const RunConfig& cfg);
std::string render(const TheoryTable& table, OutputFormat format);

struct MomentsResult {
    PopulationMoments pm;
};

MomentsResult cmd_moments(const RunConfig& cfg);
std::string render(const MomentsResult& result, OutputFormat format);

struct EstimateRow {
    EstimatorConfig estimator = EstimatorConfig::unbiased();
    Estimate estimate;
    bool failed = false;  // numeric precondition violated on this sample
};

struct EstimateResult {
    std::vector<std::size_t> indices;
    std::vector<EstimateRow> rows;
};

/// Point estimates on one sample: either the given 1-based indices, or a
/// fresh equal-probability draw of cfg.n units using `seed`.
EstimateResult cmd_estimate(const RunConfig& cfg,
                            const std::vector<std::size_t>& indices,
                            std::uint64_t seed);
std::string render(const EstimateResult& result, OutputFormat format);

struct SimulateRow {
    EmpiricalReport emp;
    double pre_empirical = 0.0;  // vs the unbiased row's empirical MSE
    double theory_bias_srs = 0.0;
    double theory_mse_srs = 0.0;
    double theory_bias_fpc = 0.0;
    double theory_mse_fpc = 0.0;
};

struct SimulateResult {
    std::size_t n = 0;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    std::vector<SimulateRow> rows;
};

/// Monte Carlo study next to both theta conventions of the theory. An empty
/// plan.estimators is filled with the default battery.
SimulateResult cmd_simulate(const RunConfig& cfg, SimulationPlan plan);
std::string render(const SimulateResult& result, OutputFormat format);

struct EnumerateRow {
    ExactReport exact;
    double pre_exact = 0.0;
    double theory_bias_srs = 0.0;
    double theory_mse_srs = 0.0;
    double theory_bias_fpc = 0.0;
    double theory_mse_fpc = 0.0;
};

struct EnumerateResult {
    std::size_t n = 0;
    std::uint64_t sample_space_size = 0;
    std::vector<EnumerateRow> rows;
};

EnumerateResult cmd_enumerate(const RunConfig& cfg, std::uint64_t limit);
std::string render(const EnumerateResult& result, OutputFormat format);

}  // namespace varest::cli
