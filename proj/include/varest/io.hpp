#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "varest/moments.hpp"

namespace varest {

/// Published census summary of a population, as read from a `key = value`
/// parameter file. C_yx and n are optional; everything else is required.
struct SummaryParams {
    std::size_t N = 0;
    std::optional<std::size_t> n;
    double S_y = 0.0;  // sqrt of the population variance of y
    double S_x = 0.0;
    double C_y = 0.0;
    double C_x = 0.0;
    double rho_yx = 0.0;
    std::optional<double> C_yx;
    double beta2y = 0.0;   // kurtosis ratio of y
    double beta2x = 0.0;   // kurtosis ratio of x
    double lambda22 = 0.0;
};

/// Loads a two-column CSV with header `y,x`. Throws SchemaError on a bad
/// header or column count, ParseError (with 1-based line number) on
/// malformed or non-finite numbers, and the Population constructor's
/// errors for fewer than two rows.
Population load_population_csv(const std::string& path);

/// Parses a `key = value` file with `#` comments. Unknown or duplicate keys
/// raise ParseError; absent required keys raise MissingKey; inadmissible
/// values (N < 2, nonpositive scales, kurtosis ratios below 1, |rho| > 1)
/// raise InputError.
SummaryParams load_summary_params(const std::string& path);

/// Population moment summary from published values. The sample size comes
/// from `n_override` if set, else from the file's own `n` key (MissingKey
/// otherwise).
PopulationMoments moments_from_summary(const SummaryParams& sp,
                                       std::optional<std::size_t> n_override,
                                       bool use_fpc);

/// Convenience: load_summary_params + moments_from_summary.
PopulationMoments load_summary_moments(const std::string& path,
                                       std::optional<std::size_t> n_override,
                                       bool use_fpc);

}  // namespace varest
