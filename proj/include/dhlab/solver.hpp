#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dhlab/arcs.hpp"
#include "dhlab/norms.hpp"
#include "dhlab/primes.hpp"

namespace dhlab {

/// |lambda1 p1 + lambda2 p2 + lambda3 p3^k - omega| <= eta.
struct ProblemInstance {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = -1.0;
    double k = 2.0;
    double omega = 0.0;
    double delta = 0.1;
    double epsilon = 0.01;

    /// All lambda_j share a sign.
    bool same_sign() const;
    /// No solution can exist: same signs and omega on the other side of 0.
    bool sign_infeasible() const;
    void validate() const;
};

struct SolutionRecord {
    std::uint64_t p1 = 0, p2 = 0, p3 = 0;
    double residual = 0.0;
    double weight = 0.0;  // log p1 log p2 log p3
    /// |residual - eta| within the 1e-14 eta guard band.
    bool near_boundary = false;
};

/// 113-bit |lambda1 p1 + lambda2 p2 + lambda3 p3^k - omega|.
quad exact_residual(const ProblemInstance& inst, std::uint64_t p1, std::uint64_t p2,
                    std::uint64_t p3);

/// All ordered triples with p1, p2 in [delta X, X], delta X <= p3^k <= X and
/// residual <= eta. Parallel over p3; output ordered by (p3, p1, p2).
std::vector<SolutionRecord> enumerate_solutions(const ProblemInstance& inst, double X, double eta,
                                                const PrimeTable& table);

/// sum weight * max{0, eta - residual}
double weighted_count(const std::vector<SolutionRecord>& solutions, double eta);

struct IntegralResult {
    std::complex<double> value;
    double step = 0.0;
    std::int64_t points = 0;
};

/// Trapezoid integral of S_1(l1 a) S_1(l2 a) S_k(l3 a) K_eta(a) e(-omega a)
/// over [lo, hi]. step 0 picks the largest admissible step.
IntegralResult I_numeric(const ProblemInstance& inst, double X, double eta, Interval iv,
                         double step, const PrimeTable& table);

/// S_1(0)^2 S_k(0) / B
double duality_tail_bound(const ProblemInstance& inst, double X, const PrimeTable& table,
                          double B);

struct MainTermRow {
    double X = 0.0;
    double eta = 0.0;
    double I_major = 0.0;
    double I_major_imag = 0.0;
    double eta2 = 0.0;
    double scale = 0.0;  // X^{1+1/k}
    double ratio = 0.0;
};

struct MainTermScan {
    std::vector<MainTermRow> rows;
    bool bounded_below = false;
    bool degenerate = false;
};

/// Integral over the major arc for each X, normalised by eta^2 X^{1+1/k}.
MainTermScan main_term_scan(const ProblemInstance& inst, const std::vector<double>& xs,
                            const PrimeTable& table);

/// CSV: p1,p2,p3,residual,weight
void write_solutions_csv(std::ostream& os, const std::vector<SolutionRecord>& solutions);

struct RunSummary {
    double X = 0.0;
    double eta = 0.0;
    std::size_t count = 0;
    double weighted_count = 0.0;
    double I_real = 0.0;
    double I_imag = 0.0;
    double tail_bound = 0.0;

    std::string to_json() const;
};

}  // namespace dhlab
