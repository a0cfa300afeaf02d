#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "dhlab/expsums.hpp"
#include "dhlab/primes.hpp"

namespace dhlab {

/// Number of (n1, n2, n3, n4) in (N, 2N]^4 with |n1^k + n2^k - n3^k - n4^k| < gamma.
struct QuadrupleCount {
    std::int64_t N = 0;
    double k = 0.0;
    double gamma = 0.0;
    std::uint64_t count = 0;
};

/// Meet-in-the-middle: sorted ordered pair sums plus a sliding open window.
QuadrupleCount count_quadruples(std::int64_t N, double k, double gamma);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

struct MomentReport {
    int exponent = 2;
    double lo = 0.0;
    double hi = 0.0;
    double value = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    double X = 0.0;
    double k = 0.0;
    double eta = std::numeric_limits<double>::quiet_NaN();  // NaN: unweighted

    std::string to_json() const;
};

enum class MomentSum { S1, Sk };

/// Oversampling factor: grid step <= 1 / (kOversample * max frequency).
inline constexpr double kOversample = 64.0;

/// Largest admissible trapezoid step for a sum with this max frequency
/// sampled at lambda * alpha.
double max_grid_step(double max_freq, double lambda = 1.0);

/// Trapezoid integral of |F(scale alpha)|^p over [lo, hi] with the given step
/// (rounded down so the interval is an integer number of steps). Parallel over
/// panels, panel sums reduced in index order.
double integrate_power(const TermSet& terms, int p, Interval iv, double step, double scale = 1.0);

/// Trapezoid integral of |F|^p on [lo, hi]; attaches the moment bound with
/// unit constant (L^2: (tau X^{1/k} + X^{2/k-1}) log^3 X, L^4 and L^8:
/// (tau X^{2/k} + X^{4/k-1}) X^{0.1} resp. (tau X^{4/k} + X^{8/k-1}) X^{0.1},
/// tau = half the interval length).
MomentReport moment_integral(MomentSum kind, int exponent, Interval iv, const SumRange& range,
                             const PrimeTable& table, std::optional<double> step = {});

double moment_bound(int exponent, double tau, double X, double k);

/// int_lo^hi |F(lambda alpha)|^p K_eta(alpha) d alpha, 0 < lo < hi.
/// For integral frequencies the part beyond 1/eta is folded onto one period
/// of F; otherwise the whole range is gridded directly, subject to
/// `max_points`.
struct WeightedMomentSpec {
    int exponent = 2;
    double lambda = 1.0;
    double eta = 0.1;
    Interval range;
    bool integral_frequencies = true;
    std::int64_t max_points = 400'000'000;
};
double weighted_moment(const TermSet& terms, const WeightedMomentSpec& spec);

/// Reference: direct gridding of the whole range, no periodic folding.
double weighted_moment_direct(const TermSet& terms, const WeightedMomentSpec& spec);

/// Generalised Selberg integral
///   int_X^{2X} (theta((x+h)^{1/k}) - theta(x^{1/k}) - ((x+h)^{1/k} - x^{1/k}))^2 dx,
/// exact on the step structure of theta, Gauss-Legendre on the smooth part.
double selberg_integral(const SumRange& range, double h, const PrimeTable& table);

/// int_{-Y}^{Y} |S_k - U_k|^2.
double su_difference_l2(double Y, const SumRange& range, const PrimeTable& table,
                        std::optional<double> step = {});

/// X^{2/k-2} log^2 X / Y + Y^2 X + Y^2 J_k(X, 1/(2Y)).
double su_difference_bound(double Y, const SumRange& range, double selberg_value);

}  // namespace dhlab
