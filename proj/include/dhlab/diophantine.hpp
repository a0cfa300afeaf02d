#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dhlab/primes.hpp"

namespace dhlab {

using i128 = __int128;

struct Convergent {
    std::int64_t a = 0;
    std::int64_t q = 1;
    int index = 0;
    double residual = 0.0;  // |q x - a|
};

struct ConvergentList {
    std::vector<Convergent> items;
    /// Fewer than the requested convergents: the double's expansion ended or
    /// the next denominator is beyond what a double resolves.
    bool truncated = false;
    /// The expansion terminated, i.e. x is a rational in double precision.
    bool terminated = false;
};

/// Continued-fraction convergents of the exact dyadic value of x, in 128-bit
/// integer arithmetic. n <= 40.
ConvergentList convergents(double x, int n);

/// |q x - a| < 1/(2q), decided exactly on the double x.
bool legendre_check(std::int64_t a, std::int64_t q, double x);

/// |q x - a| evaluated exactly and rounded once.
double approximation_residual(std::int64_t a, std::int64_t q, double x);

struct RationalWitness {
    std::int64_t a = 0;
    std::int64_t q = 1;
    double residual = 0.0;
    /// residual > 1/Q (Dirichlet guarantee not met).
    bool flagged = false;
};

/// Coprime (a, q), 1 <= q <= Q, |q x - a| <= 1/Q.
RationalWitness find_rational_witness(double x, double Q);

struct XSequenceEntry {
    std::int64_t q = 1;
    double X = 1.0;
};

struct XSequence {
    std::vector<XSequenceEntry> entries;
    /// lambda1/lambda2 reconstructs to a rational with denominator <= 1e6.
    bool rational_flag = false;
};

/// Denominators of successive convergents of lambda1/lambda2 with q^3 <= cap.
XSequence x_sequence(double lambda1, double lambda2, int count, double cap);

/// Smallest-denominator a/q with q <= max_q and a/q == x in double, if any.
bool looks_rational(double x, std::int64_t max_q = 1'000'000);

/// |S_1(alpha)| / ((X/sqrt q + sqrt(X q) + X^{4/5}) log^4 X).
double vaughan_ratio(double alpha, std::int64_t a, std::int64_t q, const SumRange& range,
                     const PrimeTable& table);

/// max over alpha of |S_1(alpha)| / (X^{1/2} alpha^{-1/2} log^4 X) on
/// `samples` log-spaced points of [1/X, X^{-3/5}].
double short_interval_ratio(const SumRange& range, const PrimeTable& table, int samples);

/// CSV: index,a,q,residual
void write_convergents_csv(std::ostream& os, const ConvergentList& list);

}  // namespace dhlab
