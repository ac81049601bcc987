#include "varest/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varest/errors.hpp"

namespace varest {

namespace {

double ipow(double base, unsigned e) noexcept {
    double r = 1.0;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

double mean_of(const std::vector<double>& v) noexcept {
    double s = 0.0;
    for (double t : v) s += t;
    return s / static_cast<double>(v.size());
}

}  // namespace

Population::Population(std::vector<double> y, std::vector<double> x)
    : y_(std::move(y)), x_(std::move(x)) {
    if (y_.size() != x_.size())
        throw InvalidArgument("population variates must have equal length");
    if (y_.size() < 2) throw InvalidArgument("population needs at least two units");
    for (std::size_t i = 0; i < y_.size(); ++i) {
        if (!std::isfinite(y_[i]) || !std::isfinite(x_[i]))
            throw InvalidArgument("population values must be finite (unit " +
                                  std::to_string(i + 1) + ")");
    }
}

double central_moment_ratio(const Population& pop, unsigned p, unsigned q) {
    if ((p + q) % 2 != 0 || p + q < 2)
        throw InvalidOrder("central moment ratio needs even order p+q >= 2");

    const auto& y = pop.y();
    const auto& x = pop.x();
    const auto N = static_cast<double>(pop.size());
    const double ybar = mean_of(y);
    const double xbar = mean_of(x);

    double mu20 = 0.0, mu02 = 0.0, mupq = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const double dy = y[i] - ybar;
        const double dx = x[i] - xbar;
        mu20 += dy * dy;
        mu02 += dx * dx;
        mupq += ipow(dy, p) * ipow(dx, q);
    }
    mu20 /= N;
    mu02 /= N;
    mupq /= N;

    if (p > 0 && mu20 <= 0.0)
        throw DegenerateVariate("study variate is constant; ratio undefined");
    if (q > 0 && mu02 <= 0.0)
        throw DegenerateVariate("auxiliary variate is constant; ratio undefined");

    double denom = 1.0;
    if (p > 0) denom *= std::pow(mu20, 0.5 * p);
    if (q > 0) denom *= std::pow(mu02, 0.5 * q);
    return mupq / denom;
}

PopulationMoments population_moments(const Population& pop, std::size_t n,
                                     bool use_fpc) {
    const std::size_t N = pop.size();
    if (n < 2 || n > N)
        throw InvalidSize("sample size must satisfy 2 <= n <= N");

    const auto& y = pop.y();
    const auto& x = pop.x();
    const double ybar = mean_of(y);
    const double xbar = mean_of(x);

    double syy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double dy = y[i] - ybar;
        const double dx = x[i] - xbar;
        syy += dy * dy;
        sxx += dx * dx;
        sxy += dy * dx;
    }

    PopulationMoments pm;
    pm.N = N;
    pm.n = n;
    pm.fpc = use_fpc;
    pm.theta = use_fpc ? 1.0 / static_cast<double>(n) - 1.0 / static_cast<double>(N)
                       : 1.0 / static_cast<double>(n);

    const auto dN1 = static_cast<double>(N - 1);
    pm.s2_y = syy / dN1;
    pm.s2_x = sxx / dN1;
    if (pm.s2_y <= 0.0) throw DegenerateVariate("study variate has zero variance");
    if (pm.s2_x <= 0.0)
        throw DegenerateVariate("auxiliary variate has zero variance");

    pm.mean_y = ybar;
    pm.mean_x = xbar;
    if (ybar != 0.0) pm.c_y = std::sqrt(pm.s2_y) / ybar;
    if (xbar != 0.0) pm.c_x = std::sqrt(pm.s2_x) / xbar;
    pm.rho_yx = (sxy / dN1) / std::sqrt(pm.s2_y * pm.s2_x);

    pm.lambda40 = central_moment_ratio(pop, 4, 0);
    pm.lambda04 = central_moment_ratio(pop, 0, 4);
    pm.lambda22 = central_moment_ratio(pop, 2, 2);
    pm.beta2y_star = pm.lambda40 - 1.0;
    pm.beta2x_star = pm.lambda04 - 1.0;
    pm.lambda22_star = pm.lambda22 - 1.0;
    return pm;
}

SampleStats sample_stats(const Population& pop,
                         const std::vector<std::size_t>& indices) {
    if (indices.size() < 2) throw TooSmall("need at least two sampled units");
    const std::size_t N = pop.size();
    for (const std::size_t i : indices) {
        if (i < 1 || i > N)
            throw BadIndex("unit index " + std::to_string(i) + " outside 1.." +
                           std::to_string(N));
    }
    std::vector<std::size_t> sorted(indices);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw BadIndex("duplicate unit index in sample");
    return detail::sample_stats_indexed(pop, indices.data(), indices.size());
}

namespace detail {

SampleStats sample_stats_indexed(const Population& pop, const std::size_t* idx,
                                 std::size_t n) noexcept {
    const auto& y = pop.y();
    const auto& x = pop.x();

    double sy = 0.0, sx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sy += y[idx[i] - 1];
        sx += x[idx[i] - 1];
    }
    const auto dn = static_cast<double>(n);
    const double my = sy / dn;
    const double mx = sx / dn;

    double syy = 0.0, sxx = 0.0, s22 = 0.0, s04 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dy = y[idx[i] - 1] - my;
        const double dx = x[idx[i] - 1] - mx;
        const double dy2 = dy * dy;
        const double dx2 = dx * dx;
        syy += dy2;
        sxx += dx2;
        s22 += dy2 * dx2;
        s04 += dx2 * dx2;
    }

    SampleStats st;
    st.n = n;
    st.s2_y = syy / (dn - 1.0);
    st.s2_x = sxx / (dn - 1.0);
    if (n == 2) {
        // A two-point sample has equal squared deviations on both sides of
        // its mean, so these ratios are identically 1. Computing them from
        // rounded deviations leaves +/-1 ulp of noise, which a downstream
        // 1/(lambda - 1) would amplify into an arbitrary slope.
        if (sxx > 0.0) {
            st.lambda04_hat = 1.0;
            if (syy > 0.0) st.lambda22_hat = 1.0;
        }
        return st;
    }
    const double m20 = syy / dn;
    const double m02 = sxx / dn;
    if (m20 > 0.0 && m02 > 0.0) st.lambda22_hat = (s22 / dn) / (m20 * m02);
    if (m02 > 0.0) st.lambda04_hat = (s04 / dn) / (m02 * m02);
    return st;
}

}  // namespace detail

}  // namespace varest
