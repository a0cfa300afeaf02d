#include "dhlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dhlab/errors.hpp"
#include "dhlab/extended.hpp"
#include "dhlab/report.hpp"
#include "integrate.hpp"

namespace dhlab {

QuadrupleCount count_quadruples(std::int64_t N, double k, double gamma) {
    if (N < 1) throw DomainError("count_quadruples: N must be >= 1");
    if (!(gamma > 0)) throw DomainError("count_quadruples: gamma must be > 0");

    std::vector<quad> powers;
    powers.reserve(static_cast<std::size_t>(N));
    for (std::int64_t n = N + 1; n <= 2 * N; ++n)
        powers.push_back(quad_pow(static_cast<std::uint64_t>(n), k));

    std::vector<quad> sums;
    sums.reserve(powers.size() * powers.size());
    for (quad a : powers)
        for (quad b : powers) sums.push_back(a + b);
    std::sort(sums.begin(), sums.end());

    // For each s count s' with s - gamma < s' < s + gamma.
    const quad g = gamma;
    std::uint64_t count = 0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        while (lo < sums.size() && !(sums[lo] > sums[i] - g)) ++lo;
        while (hi < sums.size() && sums[hi] < sums[i] + g) ++hi;
        count += hi - lo;
    }
    return {N, k, gamma, count};
}

double max_grid_step(double max_freq, double lambda) {
    const double f = max_freq * std::fabs(lambda);
    if (!(f > 0)) return std::numeric_limits<double>::infinity();
    return 1.0 / (kOversample * f);
}

namespace {

double power_of_norm(cplx z, int p) {
    const double n2 = std::norm(z);
    switch (p) {
        case 2: return n2;
        case 4: return n2 * n2;
        case 8: {
            const double n4 = n2 * n2;
            return n4 * n4;
        }
        default: return std::pow(n2, p / 2.0);
    }
}

}  // namespace

double integrate_power(const TermSet& terms, int p, Interval iv, double step, double scale) {
    const auto grid = detail::TrapezoidGrid::covering(iv.lo, iv.hi, step);
    return detail::trapezoid(terms, grid, scale,
                             [p](double, cplx z) { return power_of_norm(z, p); });
}

double moment_bound(int exponent, double tau, double X, double k) {
    const double logX = std::log(X);
    switch (exponent) {
        case 2: return (tau * std::pow(X, 1 / k) + std::pow(X, 2 / k - 1)) * logX * logX * logX;
        case 4: return (tau * std::pow(X, 2 / k) + std::pow(X, 4 / k - 1)) * std::pow(X, 0.1);
        case 8: return (tau * std::pow(X, 4 / k) + std::pow(X, 8 / k - 1)) * std::pow(X, 0.1);
        default: throw DomainError("moment_bound: exponent must be 2, 4 or 8");
    }
}

MomentReport moment_integral(MomentSum kind, int exponent, Interval iv, const SumRange& range,
                             const PrimeTable& table, std::optional<double> step) {
    if (exponent != 2 && exponent != 4 && exponent != 8)
        throw DomainError("moment_integral: exponent must be 2, 4 or 8");
    if (!(iv.hi > iv.lo)) throw DomainError("moment_integral: empty interval");

    SumRange r = range;
    if (kind == MomentSum::S1) r.k = 1.0;
    const double limit = max_grid_step(r.X);
    const double h = step.value_or(limit);
    if (h > limit * (1 + 1e-12))
        throw StepTooCoarse("moment_integral: step exceeds 1/(64 X)", limit);

    const TermSet terms = prime_terms(r, table);
    MomentReport rep;
    rep.exponent = exponent;
    rep.lo = iv.lo;
    rep.hi = iv.hi;
    rep.X = r.X;
    rep.k = r.k;
    rep.value = integrate_power(terms, exponent, iv, h);
    rep.bound = moment_bound(exponent, iv.length() / 2, r.X, r.k);
    rep.ratio = rep.bound > 0 ? rep.value / rep.bound : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

std::string MomentReport::to_json() const {
    auto num = [](double v) { return std::isfinite(v) ? fmt_double(v) : std::string("null"); };
    return "{\"exponent\":" + std::to_string(exponent) + ",\"lo\":" + num(lo) + ",\"hi\":" +
           num(hi) + ",\"value\":" + num(value) + ",\"bound\":" + num(bound) + ",\"ratio\":" +
           num(ratio) + ",\"X\":" + num(X) + ",\"k\":" + num(k) + ",\"eta\":" + num(eta) + "}";
}

double su_difference_l2(double Y, const SumRange& range, const PrimeTable& table,
                        std::optional<double> step) {
    if (!(Y > 0) || Y > 0.5) throw DomainError("su_difference_l2: need 0 < Y <= 1/2");
    const double limit = max_grid_step(range.X);
    const double h = step.value_or(limit);
    if (h > limit * (1 + 1e-12)) throw StepTooCoarse("su_difference_l2: step exceeds 1/(64 X)", limit);
    return integrate_power(difference_terms(range, table), 2, {-Y, Y}, h);
}

double su_difference_bound(double Y, const SumRange& range, double selberg_value) {
    const double X = range.X, k = range.k, L = std::log(X);
    return std::pow(X, 2 / k - 2) * L * L / Y + Y * Y * X + Y * Y * selberg_value;
}

}  // namespace dhlab
