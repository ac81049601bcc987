#include "varest/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "varest/errors.hpp"

namespace varest {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view token, std::size_t line) {
    token = trim(token);
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || token.empty())
        throw ParseError("expected a number, got '" + std::string(token) + "'", line);
    if (!std::isfinite(v))
        throw ParseError("non-finite value '" + std::string(token) + "'", line);
    return v;
}

std::size_t parse_size(std::string_view token, std::size_t line) {
    token = trim(token);
    std::size_t v = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || token.empty())
        throw ParseError("expected a positive integer, got '" + std::string(token) + "'",
                         line);
    return v;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

}  // namespace

Population load_population_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);

    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty");
    ++lineno;
    // tolerate a UTF-8 byte order mark on the first line
    std::string_view header(line);
    if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF")
        header.remove_prefix(3);
    const std::size_t comma = header.find(',');
    if (comma == std::string_view::npos ||
        trim(header.substr(0, comma)) != "y" || trim(header.substr(comma + 1)) != "x")
        throw SchemaError("expected header 'y,x' in '" + path + "'");

    std::vector<double> ys, xs;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const std::size_t c = row.find(',');
        if (c == std::string_view::npos)
            throw ParseError("expected two comma-separated columns", lineno);
        if (row.find(',', c + 1) != std::string_view::npos)
            throw ParseError("expected exactly two columns", lineno);
        ys.push_back(parse_double(row.substr(0, c), lineno));
        xs.push_back(parse_double(row.substr(c + 1), lineno));
    }
    if (ys.size() < 2)
        throw InputError("'" + path + "' holds fewer than two data rows");
    return Population(std::move(ys), std::move(xs));
}

SummaryParams load_summary_params(const std::string& path) {
    std::ifstream in = open_or_throw(path);

    std::map<std::string, std::pair<std::string, std::size_t>> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s(line);
        const std::size_t hash = s.find('#');
        if (hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", lineno);
        const std::string key(trim(s.substr(0, eq)));
        const std::string value(trim(s.substr(eq + 1)));
        if (key.empty()) throw ParseError("empty key", lineno);
        if (kv.count(key)) throw ParseError("duplicate key '" + key + "'", lineno);
        kv[key] = {value, lineno};
    }

    static const char* known[] = {"N",      "n",      "S_y",    "S_x",
                                  "C_y",    "C_x",    "rho_yx", "C_yx",
                                  "beta2y", "beta2x", "lambda22"};
    for (const auto& [key, entry] : kv) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) {
                ok = true;
                break;
            }
        if (!ok) throw ParseError("unknown key '" + key + "'", entry.second);
    }

    auto required = [&](const char* key) -> std::pair<std::string, std::size_t> {
        const auto it = kv.find(key);
        if (it == kv.end()) throw MissingKey(key);
        return it->second;
    };

    SummaryParams sp;
    {
        const auto [value, lineno2] = required("N");
        sp.N = parse_size(value, lineno2);
    }
    if (const auto it = kv.find("n"); it != kv.end())
        sp.n = parse_size(it->second.first, it->second.second);
    {
        const auto [v, l] = required("S_y");
        sp.S_y = parse_double(v, l);
    }
    {
        const auto [v, l] = required("S_x");
        sp.S_x = parse_double(v, l);
    }
    {
        const auto [v, l] = required("C_y");
        sp.C_y = parse_double(v, l);
    }
    {
        const auto [v, l] = required("C_x");
        sp.C_x = parse_double(v, l);
    }
    {
        const auto [v, l] = required("rho_yx");
        sp.rho_yx = parse_double(v, l);
    }
    if (const auto it = kv.find("C_yx"); it != kv.end())
        sp.C_yx = parse_double(it->second.first, it->second.second);
    {
        const auto [v, l] = required("beta2y");
        sp.beta2y = parse_double(v, l);
    }
    {
        const auto [v, l] = required("beta2x");
        sp.beta2x = parse_double(v, l);
    }
    {
        const auto [v, l] = required("lambda22");
        sp.lambda22 = parse_double(v, l);
    }

    if (sp.N < 2) throw InputError("summary needs N >= 2");
    if (sp.S_y <= 0.0 || sp.S_x <= 0.0)
        throw InputError("summary needs positive S_y and S_x");
    if (sp.beta2y < 1.0 || sp.beta2x < 1.0)
        throw InputError("kurtosis ratios of a finite population cannot fall below 1");
    if (std::abs(sp.rho_yx) > 1.0) throw InputError("|rho_yx| cannot exceed 1");
    return sp;
}

PopulationMoments moments_from_summary(const SummaryParams& sp,
                                       std::optional<std::size_t> n_override,
                                       bool use_fpc) {
    std::size_t n = 0;
    if (n_override)
        n = *n_override;
    else if (sp.n)
        n = *sp.n;
    else
        throw MissingKey("n");
    if (n < 2 || n > sp.N)
        throw InvalidSize("sample size must satisfy 2 <= n <= N");

    PopulationMoments pm;
    pm.N = sp.N;
    pm.n = n;
    pm.fpc = use_fpc;
    pm.theta = use_fpc
                   ? 1.0 / static_cast<double>(n) - 1.0 / static_cast<double>(sp.N)
                   : 1.0 / static_cast<double>(n);
    pm.s2_y = sp.S_y * sp.S_y;
    pm.s2_x = sp.S_x * sp.S_x;
    pm.c_y = sp.C_y;
    pm.c_x = sp.C_x;
    pm.rho_yx = sp.rho_yx;
    pm.c_yx = sp.C_yx;
    pm.lambda40 = sp.beta2y;
    pm.lambda04 = sp.beta2x;
    pm.lambda22 = sp.lambda22;
    pm.beta2y_star = sp.beta2y - 1.0;
    pm.beta2x_star = sp.beta2x - 1.0;
    pm.lambda22_star = sp.lambda22 - 1.0;
    return pm;
}

PopulationMoments load_summary_moments(const std::string& path,
                                       std::optional<std::size_t> n_override,
                                       bool use_fpc) {
    return moments_from_summary(load_summary_params(path), n_override, use_fpc);
}

}  // namespace varest
