#include <algorithm>
#include <cmath>
#include <vector>

#include "dhlab/errors.hpp"
#include "dhlab/norms.hpp"
#include "integrate.hpp"

namespace dhlab {

namespace {

double weighted_power(cplx z, int p) {
    const double n2 = std::norm(z);
    double v = n2;
    for (int e = 2; e < p; e += 2) v *= n2;
    return v;
}

double direct_part(const TermSet& terms, const WeightedMomentSpec& spec, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const double lambda = std::fabs(spec.lambda);
    const auto grid = detail::TrapezoidGrid::covering(lo, hi, max_grid_step(terms.max_freq(), lambda));
    if (grid.points() > spec.max_points)
        throw BudgetExceeded("weighted_moment: direct grid needs " + std::to_string(grid.points()) +
                             " points");
    const KernelParams kp{spec.eta};
    const int p = spec.exponent;
    return detail::trapezoid(terms, grid, lambda, [kp, p](double alpha, cplx z) {
        return weighted_power(z, p) * kernel_K(alpha, kp);
    });
}

// Cubic Lagrange interpolation on uniform nodes over [0, 1].
double interpolate(const std::vector<double>& nodes, double v) {
    const int n = static_cast<int>(nodes.size()) - 1;
    const double x = v * n;
    int i = std::clamp(static_cast<int>(std::floor(x)) - 1, 0, n - 3);
    const double t = x - i;
    const double y0 = nodes[i], y1 = nodes[i + 1], y2 = nodes[i + 2], y3 = nodes[i + 3];
    return y0 * (t - 1) * (t - 2) * (t - 3) / -6 + y1 * t * (t - 2) * (t - 3) / 2 +
           y2 * t * (t - 1) * (t - 3) / -2 + y3 * t * (t - 1) * (t - 2) / 6;
}

// int over alpha in [n0/lambda, n1/lambda] of |F(lambda alpha)|^p K(alpha), F
// 1-periodic: one period of F against A(v) = sum_n K((n + v) / lambda).
double folded_part(const TermSet& terms, const WeightedMomentSpec& spec, double lambda,
                   std::int64_t n0, std::int64_t n1) {
    const KernelParams kp{spec.eta};
    const int coarse = 256 * std::max(1, static_cast<int>(std::ceil(spec.eta / lambda)));
    std::vector<double> A(static_cast<std::size_t>(coarse) + 1, 0.0);
#pragma omp parallel for schedule(static)
    for (int c = 0; c <= coarse; ++c) {
        const double v = static_cast<double>(c) / coarse;
        CompensatedSum s;
        for (std::int64_t n = n0; n < n1; ++n) s.add(kernel_K((static_cast<double>(n) + v) / lambda, kp));
        A[static_cast<std::size_t>(c)] = s.value();
    }
    const auto grid = detail::TrapezoidGrid::covering(0.0, 1.0, max_grid_step(terms.max_freq()));
    const int p = spec.exponent;
    const double integral = detail::trapezoid(terms, grid, 1.0, [&A, p](double v, cplx z) {
        return weighted_power(z, p) * interpolate(A, v);
    });
    return integral / lambda;
}

void validate(const WeightedMomentSpec& spec) {
    if (spec.exponent != 2 && spec.exponent != 4 && spec.exponent != 8)
        throw DomainError("weighted_moment: exponent must be 2, 4 or 8");
    if (!(spec.eta > 0 && spec.eta < 1)) throw DomainError("weighted_moment: eta must be in (0,1)");
    if (spec.lambda == 0.0) throw DomainError("weighted_moment: lambda must be nonzero");
    if (!(spec.range.lo >= 0 && spec.range.hi > spec.range.lo))
        throw DomainError("weighted_moment: need 0 <= lo < hi");
}

}  // namespace

double weighted_moment_direct(const TermSet& terms, const WeightedMomentSpec& spec) {
    validate(spec);
    return direct_part(terms, spec, spec.range.lo, spec.range.hi);
}

double weighted_moment(const TermSet& terms, const WeightedMomentSpec& spec) {
    validate(spec);
    if (!spec.integral_frequencies) return weighted_moment_direct(terms, spec);

    const double lambda = std::fabs(spec.lambda);
    const double split = std::max(spec.range.lo, 1.0 / spec.eta);
    double total = direct_part(terms, spec, spec.range.lo, std::min(spec.range.hi, split));
    if (spec.range.hi <= split) return total;

    const double u0 = lambda * split, u1 = lambda * spec.range.hi;
    const auto n0 = static_cast<std::int64_t>(std::ceil(u0));
    const auto n1 = static_cast<std::int64_t>(std::floor(u1));
    if (n1 - n0 < 1) return total + direct_part(terms, spec, split, spec.range.hi);

    total += direct_part(terms, spec, split, static_cast<double>(n0) / lambda);
    total += folded_part(terms, spec, lambda, n0, n1);
    total += direct_part(terms, spec, static_cast<double>(n1) / lambda, spec.range.hi);
    return total;
}

}  // namespace dhlab
