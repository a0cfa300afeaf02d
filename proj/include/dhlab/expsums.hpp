#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dhlab/extended.hpp"
#include "dhlab/primes.hpp"

namespace dhlab {

using cplx = std::complex<double>;

/// Frequencies f_n (as hi/lo pairs) and weights w_n of a trigonometric sum
/// F(alpha) = sum_n w_n e(f_n alpha). Stored structure-of-arrays for the
/// grid kernel.
struct TermSet {
    std::vector<double> freq_hi;
    std::vector<double> freq_lo;
    std::vector<double> weight;

    std::size_t size() const noexcept { return weight.size(); }
    bool empty() const noexcept { return weight.empty(); }
    double max_freq() const;
    /// F(0) = sum of weights.
    double total_weight() const;
    void push(DoubleDouble f, double w);
};

/// log p e(p^k alpha) over the window.
TermSet prime_terms(const SumRange& range, const PrimeTable& table);
/// e(n^k alpha) over the window.
TermSet integer_terms(const SumRange& range);
/// Terms of S_k - U_k: weight (log n if n prime else 0) - 1.
TermSet difference_terms(const SumRange& range, const PrimeTable& table);

/// Pointwise evaluation at an extended-precision alpha.
cplx evaluate(const TermSet& terms, DoubleDouble alpha);

cplx eval_S_k(double alpha, const SumRange& range, const PrimeTable& table);
cplx eval_U_k(double alpha, const SumRange& range);

/// Oscillatory integral int_{(dX)^{1/k}}^{X^{1/k}} e(t^k alpha) dt by adaptive
/// 16-point Gauss-Legendre panels. Throws NumericFailure on non-convergence.
cplx eval_T_k(double alpha, const SumRange& range);

/// Uniform grid alpha_j = scale * (alpha0 + j * step), j = 0..count-1.
/// `scale` lets S(lambda alpha) be sampled on an alpha grid without
/// rounding lambda * alpha to double first.
struct GridSpec {
    double alpha0 = 0.0;
    double step = 0.0;
    std::int64_t count = 0;
    double scale = 1.0;

    DoubleDouble point(std::int64_t j) const;
};

struct SpectrumGrid {
    GridSpec spec;
    std::vector<cplx> values;

    double alpha(std::int64_t j) const { return spec.point(j).value(); }
};

/// Steps between exact phase re-synchronisation in the rotation recurrence.
inline constexpr std::int64_t kResyncInterval = 1024;

/// Throws BudgetExceeded if the grid would push |f alpha| past kPhaseBudget.
void check_phase_budget(const TermSet& terms, const GridSpec& spec);

/// Rotation-recurrence kernel, OpenMP-parallel over slices of
/// kResyncInterval points. Bit-identical for any thread count.
SpectrumGrid eval_grid(const TermSet& terms, const GridSpec& spec);
/// Same recurrence, single thread. Output is bit-identical to eval_grid.
SpectrumGrid eval_grid_serial(const TermSet& terms, const GridSpec& spec);
/// Reference: independent pointwise evaluation at every grid point.
SpectrumGrid eval_grid_reference(const TermSet& terms, const GridSpec& spec);

/// Writes values into `out` (size spec.count); used by the chunked
/// integrators to avoid reallocating.
void eval_grid_into(const TermSet& terms, const GridSpec& spec, std::span<cplx> out,
                    bool parallel = true);

/// Serial evaluation of points j0 .. j0+m-1 of `spec` into out[0..m). When j0
/// is a multiple of kResyncInterval the values are bit-identical to eval_grid.
void eval_grid_range(const TermSet& terms, const GridSpec& spec, std::int64_t j0, std::int64_t m,
                     std::span<cplx> out);

enum class SumKind { S, U };
SpectrumGrid eval_grid(SumKind kind, const SumRange& range, const PrimeTable& table,
                       const GridSpec& spec);

struct KernelParams {
    double eta = 0.5;
};

/// Fejer kernel K_eta(alpha) = (sin(pi alpha eta) / (pi alpha))^2.
double kernel_K(double alpha, KernelParams p);
/// Its Fourier transform max{0, eta - |alpha|}.
double kernel_Khat(double alpha, KernelParams p);

/// CSV: alpha,re,im,abs
void write_grid_csv(std::ostream& os, const SpectrumGrid& grid);

}  // namespace dhlab
