#pragma once

// Extended-precision helpers.
//
// Phases p^k * alpha are carried as unevaluated sums of two doubles
// (hi + lo, about 32 significant digits). Anything needing a transcendental
// function in extended precision (p^k for real k, k*log p) goes through
// __float128.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

namespace dhlab {

using quad = __float128;

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    static DoubleDouble from_quad(quad v);
    quad to_quad() const { return static_cast<quad>(hi) + static_cast<quad>(lo); }
    double value() const { return hi + lo; }
};

inline DoubleDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, double b) {
    DoubleDouble p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

/// Largest |freq.hi * alpha.hi| for which frac(freq * alpha) is still
/// resolved to ~1e-16 absolute.
inline constexpr double kPhaseBudget = 4503599627370496.0;  // 2^52

/// frac(freq * alpha) in [0, 1) using exact hi*hi splitting; the caller
/// guarantees |freq.hi * alpha.hi| < kPhaseBudget.
inline double phase_frac(DoubleDouble freq, DoubleDouble alpha) {
    DoubleDouble p = two_prod(freq.hi, alpha.hi);
    double head = p.hi - std::floor(p.hi);
    double tail = p.lo + freq.hi * alpha.lo + freq.lo * alpha.hi;
    double r = head + tail;
    return r - std::floor(r);
}

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// e(r) = exp(2 pi i r).
inline std::complex<double> unit_phasor(double r) {
    double a = kTwoPi * r;
    return {std::cos(a), std::sin(a)};
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// True when k is a small positive integer, so p^k is exact in integers.
bool is_integral_exponent(double k);

/// n^k in extended precision (exact for integral k while n^k < 2^113).
quad quad_pow(std::uint64_t n, double k);

std::string quad_to_string(quad v, int digits = 34);

}  // namespace dhlab
