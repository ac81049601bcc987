#include "varest/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <json.hpp>

#include "varest/errors.hpp"
#include "varest/rng.hpp"

namespace varest::cli {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_fixed(double v, int prec) {
    if (!std::isfinite(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string fmt_g(double v, int prec = 6) {
    if (!std::isfinite(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// Shortest decimal string that parses back to the same double.
std::string fmt_full(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string lpad(std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
}

std::string rpad(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

json params_json(const EstimatorConfig& cfg) {
    switch (cfg.kind()) {
        case EstimatorKind::Khosh: {
            const auto& p = cfg.khosh_params();
            return json{{"a", p.a}, {"b", p.b}, {"alpha", p.alpha}};
        }
        case EstimatorKind::SahaiRay:
            return json{{"w", cfg.sahai_params().w}};
        case EstimatorKind::Generalized: {
            const auto& p = cfg.generalized_params();
            return json{{"a", p.a},           {"c", p.c},
                        {"d", p.d},           {"alpha1", p.alpha1},
                        {"alpha", p.alpha},   {"beta", p.beta}};
        }
        default:
            return json::object();
    }
}

double safe_bias(const EstimatorConfig& cfg, const PopulationMoments& pm,
                 const TheoryOptions& opts) {
    try {
        return theoretical_bias(cfg, pm, opts);
    } catch (const NumericError&) {
        return kNaN;
    }
}

double safe_mse(const EstimatorConfig& cfg, const PopulationMoments& pm) {
    try {
        return theoretical_mse(cfg, pm);
    } catch (const NumericError&) {
        return kNaN;
    }
}

}  // namespace

LoadedInput load_input(const RunConfig& cfg) {
    const bool has_data = !cfg.data_path.empty();
    const bool has_params = !cfg.params_path.empty();
    if (has_data == has_params)
        throw ModeError("exactly one of --data and --params must be given");

    LoadedInput in;
    if (has_data) {
        in.pop = load_population_csv(cfg.data_path);
        if (!cfg.n) throw InputError("--n is required with --data");
        in.pm = population_moments(*in.pop, *cfg.n, cfg.use_fpc);
    } else {
        in.pm = load_summary_moments(cfg.params_path, cfg.n, cfg.use_fpc);
    }
    return in;
}

std::vector<EstimatorConfig> default_estimators(const PopulationMoments& pm,
                                                GeneralizedReading reading) {
    std::vector<EstimatorConfig> v;
    v.reserve(6);
    v.push_back(EstimatorConfig::unbiased());
    v.push_back(EstimatorConfig::ratio());
    v.push_back(EstimatorConfig::regression());
    v.push_back(EstimatorConfig::khosh(optimal_khosh(pm, khosh_preset())));
    v.push_back(EstimatorConfig::sahai_ray(optimal_sahai(pm)));
    const GeneralizedParams gp = reading == GeneralizedReading::Cx
                                     ? generalized_preset_cx(pm)
                                     : generalized_preset_bx(pm);
    v.push_back(EstimatorConfig::generalized(optimal_generalized(pm, gp)));
    return v;
}

TheoryTable cmd_theory_table(const RunConfig& cfg) {
    const LoadedInput in = load_input(cfg);
    const std::vector<EstimatorConfig> ests =
        default_estimators(in.pm, cfg.reading);
    const TheoryOptions topts{cfg.paper_literal};
    const double ref = theoretical_mse(ests.front(), in.pm);

    TheoryTable t;
    t.pm = in.pm;
    t.rows.reserve(ests.size());
    for (const auto& e : ests) {
        TheoryReport r;
        r.estimator = e;
        r.bias = theoretical_bias(e, in.pm, topts);
        r.mse = theoretical_mse(e, in.pm);
        r.pre = pre(ref, r.mse);
        t.rows.push_back(r);
    }
    return t;
}

std::string render(const TheoryTable& t, OutputFormat format) {
    std::string out;
    switch (format) {
        case OutputFormat::Table: {
            out += "# N=" + std::to_string(t.pm.N) + " n=" + std::to_string(t.pm.n) +
                   " theta=" + fmt_g(t.pm.theta) +
                   (t.pm.fpc ? " (fpc)" : " (1/n)") + "\n";
            out += rpad("estimator", 12) + lpad("bias", 14) + lpad("mse", 14) +
                   lpad("pre", 14) + "\n";
            for (const auto& r : t.rows) {
                out += rpad(r.estimator.name(), 12) + lpad(fmt_fixed(r.bias, 3), 14) +
                       lpad(fmt_fixed(r.mse, 3), 14) + lpad(fmt_fixed(r.pre, 3), 14) +
                       "\n";
            }
            break;
        }
        case OutputFormat::Csv: {
            out += "estimator,bias,mse,pre\n";
            for (const auto& r : t.rows)
                out += r.estimator.name() + "," + fmt_full(r.bias) + "," +
                       fmt_full(r.mse) + "," + fmt_full(r.pre) + "\n";
            break;
        }
        case OutputFormat::Json: {
            json arr = json::array();
            for (const auto& r : t.rows) {
                arr.push_back(json{{"estimator", r.estimator.name()},
                                   {"bias", r.bias},
                                   {"mse", r.mse},
                                   {"pre", r.pre},
                                   {"params", params_json(r.estimator)}});
            }
            out = arr.dump(2) + "\n";
            break;
        }
    }
    return out;
}

MomentsResult cmd_moments(const RunConfig& cfg) {
    return MomentsResult{load_input(cfg).pm};
}

std::string render(const MomentsResult& result, OutputFormat format) {
    const PopulationMoments& pm = result.pm;
    struct Field {
        const char* key;
        std::optional<double> value;
    };
    const Field fields[] = {
        {"theta", pm.theta},
        {"mean_y", pm.mean_y},
        {"mean_x", pm.mean_x},
        {"s2_y", pm.s2_y},
        {"s2_x", pm.s2_x},
        {"c_y", pm.c_y},
        {"c_x", pm.c_x},
        {"rho_yx", pm.rho_yx},
        {"lambda40", pm.lambda40},
        {"lambda04", pm.lambda04},
        {"lambda22", pm.lambda22},
        {"beta2y_star", pm.beta2y_star},
        {"beta2x_star", pm.beta2x_star},
        {"lambda22_star", pm.lambda22_star},
        {"c_yx", pm.c_yx},
    };

    std::string out;
    switch (format) {
        case OutputFormat::Table: {
            out += "N = " + std::to_string(pm.N) + "\n";
            out += "n = " + std::to_string(pm.n) + "\n";
            out += std::string("fpc = ") + (pm.fpc ? "on" : "off") + "\n";
            for (const auto& f : fields)
                out += std::string(f.key) + " = " +
                       (f.value ? fmt_full(*f.value) : "n/a") + "\n";
            break;
        }
        case OutputFormat::Csv: {
            out += "key,value\n";
            out += "N," + std::to_string(pm.N) + "\n";
            out += "n," + std::to_string(pm.n) + "\n";
            out += std::string("fpc,") + (pm.fpc ? "1" : "0") + "\n";
            for (const auto& f : fields)
                out += std::string(f.key) + "," +
                       (f.value ? fmt_full(*f.value) : "") + "\n";
            break;
        }
        case OutputFormat::Json: {
            json obj{{"N", pm.N}, {"n", pm.n}, {"fpc", pm.fpc}};
            for (const auto& f : fields) {
                if (f.value)
                    obj[f.key] = *f.value;
                else
                    obj[f.key] = nullptr;
            }
            out = obj.dump(2) + "\n";
            break;
        }
    }
    return out;
}

EstimateResult cmd_estimate(const RunConfig& cfg,
                            const std::vector<std::size_t>& indices,
                            std::uint64_t seed) {
    RunConfig adjusted = cfg;
    if (!adjusted.n && !indices.empty()) adjusted.n = indices.size();
    const LoadedInput in = load_input(adjusted);
    if (!in.pop) throw ModeError("estimate needs unit-level data (--data)");

    EstimateResult result;
    if (!indices.empty()) {
        result.indices = indices;
    } else {
        Rng rng(seed);
        result.indices = srswor_sample(in.pop->size(), *adjusted.n, rng);
    }
    const SampleStats st = sample_stats(*in.pop, result.indices);

    EvalOptions opts;
    opts.clamp_nonnegative = cfg.clamp_nonnegative;
    for (const auto& e : default_estimators(in.pm, cfg.reading)) {
        EstimateRow row;
        row.estimator = e;
        const EvalStatus status = evaluate_nothrow(e, st, in.pm, opts, row.estimate);
        row.failed = status != EvalStatus::Ok;
        if (row.failed) row.estimate.value = kNaN;
        result.rows.push_back(row);
    }
    return result;
}

namespace {

std::string flags_of(const EstimateRow& r) {
    std::string f;
    if (r.failed) f = "failed";
    if (r.estimate.negative) f += f.empty() ? "negative" : ",negative";
    if (r.estimate.expansion_suspect)
        f += f.empty() ? "expansion_suspect" : ",expansion_suspect";
    return f.empty() ? "-" : f;
}

}  // namespace

std::string render(const EstimateResult& result, OutputFormat format) {
    std::string out;
    switch (format) {
        case OutputFormat::Table: {
            std::string ix = "# indices =";
            for (const auto i : result.indices) ix += " " + std::to_string(i);
            out += ix + "\n";
            out += rpad("estimator", 12) + lpad("estimate", 16) + "  flags\n";
            for (const auto& r : result.rows)
                out += rpad(r.estimator.name(), 12) +
                       lpad(fmt_g(r.estimate.value, 9), 16) + "  " + flags_of(r) +
                       "\n";
            break;
        }
        case OutputFormat::Csv: {
            out += "estimator,estimate,negative,expansion_suspect,failed\n";
            for (const auto& r : result.rows)
                out += r.estimator.name() + "," + fmt_full(r.estimate.value) + "," +
                       (r.estimate.negative ? "1" : "0") + "," +
                       (r.estimate.expansion_suspect ? "1" : "0") + "," +
                       (r.failed ? "1" : "0") + "\n";
            break;
        }
        case OutputFormat::Json: {
            json arr = json::array();
            for (const auto& r : result.rows)
                arr.push_back(json{{"estimator", r.estimator.name()},
                                   {"estimate", r.estimate.value},
                                   {"negative", r.estimate.negative},
                                   {"expansion_suspect", r.estimate.expansion_suspect},
                                   {"failed", r.failed},
                                   {"params", params_json(r.estimator)}});
            json obj{{"indices", result.indices}, {"rows", arr}};
            out = obj.dump(2) + "\n";
            break;
        }
    }
    return out;
}

SimulateResult cmd_simulate(const RunConfig& cfg, SimulationPlan plan) {
    const LoadedInput in = load_input(cfg);
    if (!in.pop) throw ModeError("simulate needs unit-level data (--data)");
    if (plan.n == 0) {
        if (!cfg.n) throw InputError("--n is required");
        plan.n = *cfg.n;
    }
    if (plan.estimators.empty())
        plan.estimators = default_estimators(in.pm, cfg.reading);
    plan.eval.clamp_nonnegative =
        plan.eval.clamp_nonnegative || cfg.clamp_nonnegative;

    const std::vector<EmpiricalReport> reports = simulate(*in.pop, plan);

    const PopulationMoments pm_srs = population_moments(*in.pop, plan.n, false);
    const PopulationMoments pm_fpc = population_moments(*in.pop, plan.n, true);
    const TheoryOptions topts{cfg.paper_literal};

    double unbiased_mse = kNaN;
    for (const auto& rep : reports)
        if (rep.estimator.kind() == EstimatorKind::Unbiased) {
            unbiased_mse = rep.empirical_mse;
            break;
        }

    SimulateResult result;
    result.n = plan.n;
    result.replications = plan.replications;
    result.seed = plan.seed;
    for (const auto& rep : reports) {
        SimulateRow row;
        row.emp = rep;
        row.pre_empirical = (unbiased_mse > 0.0 && rep.empirical_mse > 0.0)
                                ? 100.0 * unbiased_mse / rep.empirical_mse
                                : kNaN;
        row.theory_bias_srs = safe_bias(rep.estimator, pm_srs, topts);
        row.theory_mse_srs = safe_mse(rep.estimator, pm_srs);
        row.theory_bias_fpc = safe_bias(rep.estimator, pm_fpc, topts);
        row.theory_mse_fpc = safe_mse(rep.estimator, pm_fpc);
        result.rows.push_back(row);
    }
    return result;
}

std::string render(const SimulateResult& result, OutputFormat format) {
    std::string out;
    switch (format) {
        case OutputFormat::Table: {
            out += "# n=" + std::to_string(result.n) +
                   " replications=" + std::to_string(result.replications) +
                   " seed=" + std::to_string(result.seed) + "\n";
            out += rpad("estimator", 12) + lpad("emp_bias", 13) + lpad("emp_mse", 14) +
                   lpad("stderr", 12) + lpad("pre", 11) + lpad("neg", 9) +
                   lpad("failed", 9) + lpad("mse(1/n)", 14) + lpad("mse(fpc)", 14) +
                   "\n";
            for (const auto& r : result.rows) {
                out += rpad(r.emp.estimator.name(), 12) +
                       lpad(fmt_g(r.emp.empirical_bias), 13) +
                       lpad(fmt_fixed(r.emp.empirical_mse, 3), 14) +
                       lpad(fmt_g(r.emp.stderr_of_mean), 12) +
                       lpad(fmt_fixed(r.pre_empirical, 3), 11) +
                       lpad(std::to_string(r.emp.negative_estimate_count), 9) +
                       lpad(std::to_string(r.emp.failed_sample_count), 9) +
                       lpad(fmt_fixed(r.theory_mse_srs, 3), 14) +
                       lpad(fmt_fixed(r.theory_mse_fpc, 3), 14) + "\n";
            }
            break;
        }
        case OutputFormat::Csv: {
            out += "estimator,mean,bias,mse,stderr,pre,valid,negative,failed,"
                   "theory_bias_srs,theory_mse_srs,theory_bias_fpc,theory_mse_fpc\n";
            for (const auto& r : result.rows) {
                out += r.emp.estimator.name() + "," + fmt_full(r.emp.mean_estimate) +
                       "," + fmt_full(r.emp.empirical_bias) + "," +
                       fmt_full(r.emp.empirical_mse) + "," +
                       fmt_full(r.emp.stderr_of_mean) + "," +
                       fmt_full(r.pre_empirical) + "," +
                       std::to_string(r.emp.valid_samples) + "," +
                       std::to_string(r.emp.negative_estimate_count) + "," +
                       std::to_string(r.emp.failed_sample_count) + "," +
                       fmt_full(r.theory_bias_srs) + "," + fmt_full(r.theory_mse_srs) +
                       "," + fmt_full(r.theory_bias_fpc) + "," +
                       fmt_full(r.theory_mse_fpc) + "\n";
            }
            break;
        }
        case OutputFormat::Json: {
            json arr = json::array();
            for (const auto& r : result.rows) {
                arr.push_back(json{
                    {"estimator", r.emp.estimator.name()},
                    {"bias", r.emp.empirical_bias},
                    {"mse", r.emp.empirical_mse},
                    {"pre", r.pre_empirical},
                    {"stderr", r.emp.stderr_of_mean},
                    {"failed_samples", r.emp.failed_sample_count},
                    {"negative_estimates", r.emp.negative_estimate_count},
                    {"mean", r.emp.mean_estimate},
                    {"valid_samples", r.emp.valid_samples},
                    {"theory",
                     json{{"bias_srs", r.theory_bias_srs},
                          {"mse_srs", r.theory_mse_srs},
                          {"bias_fpc", r.theory_bias_fpc},
                          {"mse_fpc", r.theory_mse_fpc}}},
                    {"params", params_json(r.emp.estimator)}});
            }
            json obj{{"n", result.n},
                     {"replications", result.replications},
                     {"seed", result.seed},
                     {"rows", arr}};
            out = obj.dump(2) + "\n";
            break;
        }
    }
    return out;
}

EnumerateResult cmd_enumerate(const RunConfig& cfg, std::uint64_t limit) {
    const LoadedInput in = load_input(cfg);
    if (!in.pop) throw ModeError("enumerate needs unit-level data (--data)");
    if (!cfg.n) throw InputError("--n is required");
    const std::size_t n = *cfg.n;

    EvalOptions opts;
    opts.clamp_nonnegative = cfg.clamp_nonnegative;
    const std::vector<EstimatorConfig> ests = default_estimators(in.pm, cfg.reading);
    const std::vector<ExactReport> reports =
        enumerate_exact(*in.pop, n, ests, limit, opts);

    const PopulationMoments pm_srs = population_moments(*in.pop, n, false);
    const PopulationMoments pm_fpc = population_moments(*in.pop, n, true);
    const TheoryOptions topts{cfg.paper_literal};

    double unbiased_mse = kNaN;
    for (const auto& rep : reports)
        if (rep.estimator.kind() == EstimatorKind::Unbiased) {
            unbiased_mse = rep.empirical_mse;
            break;
        }

    EnumerateResult result;
    result.n = n;
    result.sample_space_size = reports.empty() ? 0 : reports.front().sample_space_size;
    for (const auto& rep : reports) {
        EnumerateRow row;
        row.exact = rep;
        row.pre_exact = (unbiased_mse > 0.0 && rep.empirical_mse > 0.0)
                            ? 100.0 * unbiased_mse / rep.empirical_mse
                            : kNaN;
        row.theory_bias_srs = safe_bias(rep.estimator, pm_srs, topts);
        row.theory_mse_srs = safe_mse(rep.estimator, pm_srs);
        row.theory_bias_fpc = safe_bias(rep.estimator, pm_fpc, topts);
        row.theory_mse_fpc = safe_mse(rep.estimator, pm_fpc);
        result.rows.push_back(row);
    }
    return result;
}

std::string render(const EnumerateResult& result, OutputFormat format) {
    std::string out;
    switch (format) {
        case OutputFormat::Table: {
            out += "# n=" + std::to_string(result.n) +
                   " subsets=" + std::to_string(result.sample_space_size) + "\n";
            out += rpad("estimator", 12) + lpad("exact_bias", 14) +
                   lpad("exact_mse", 14) + lpad("pre", 11) + lpad("neg", 9) +
                   lpad("failed", 9) + lpad("mse(1/n)", 14) + lpad("mse(fpc)", 14) +
                   "\n";
            for (const auto& r : result.rows) {
                out += rpad(r.exact.estimator.name(), 12) +
                       lpad(fmt_g(r.exact.empirical_bias), 14) +
                       lpad(fmt_fixed(r.exact.empirical_mse, 3), 14) +
                       lpad(fmt_fixed(r.pre_exact, 3), 11) +
                       lpad(std::to_string(r.exact.negative_estimate_count), 9) +
                       lpad(std::to_string(r.exact.failed_sample_count), 9) +
                       lpad(fmt_fixed(r.theory_mse_srs, 3), 14) +
                       lpad(fmt_fixed(r.theory_mse_fpc, 3), 14) + "\n";
            }
            break;
        }
        case OutputFormat::Csv: {
            out += "estimator,mean,bias,mse,pre,valid,negative,failed,"
                   "theory_bias_srs,theory_mse_srs,theory_bias_fpc,theory_mse_fpc\n";
            for (const auto& r : result.rows) {
                out += r.exact.estimator.name() + "," +
                       fmt_full(r.exact.mean_estimate) + "," +
                       fmt_full(r.exact.empirical_bias) + "," +
                       fmt_full(r.exact.empirical_mse) + "," +
                       fmt_full(r.pre_exact) + "," +
                       std::to_string(r.exact.valid_samples) + "," +
                       std::to_string(r.exact.negative_estimate_count) + "," +
                       std::to_string(r.exact.failed_sample_count) + "," +
                       fmt_full(r.theory_bias_srs) + "," + fmt_full(r.theory_mse_srs) +
                       "," + fmt_full(r.theory_bias_fpc) + "," +
                       fmt_full(r.theory_mse_fpc) + "\n";
            }
            break;
        }
        case OutputFormat::Json: {
            json arr = json::array();
            for (const auto& r : result.rows) {
                arr.push_back(json{
                    {"estimator", r.exact.estimator.name()},
                    {"bias", r.exact.empirical_bias},
                    {"mse", r.exact.empirical_mse},
                    {"pre", r.pre_exact},
                    {"stderr", r.exact.stderr_of_mean},
                    {"failed_samples", r.exact.failed_sample_count},
                    {"negative_estimates", r.exact.negative_estimate_count},
                    {"mean", r.exact.mean_estimate},
                    {"valid_samples", r.exact.valid_samples},
                    {"theory",
                     json{{"bias_srs", r.theory_bias_srs},
                          {"mse_srs", r.theory_mse_srs},
                          {"bias_fpc", r.theory_bias_fpc},
                          {"mse_fpc", r.theory_mse_fpc}}},
                    {"params", params_json(r.exact.estimator)}});
            }
            json obj{{"n", result.n},
                     {"sample_space_size", result.sample_space_size},
                     {"rows", arr}};
            out = obj.dump(2) + "\n";
            break;
        }
    }
    return out;
}

}  // namespace varest::cli
