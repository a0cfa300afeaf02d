// Rotation-recurrence evaluation of trigonometric sums on uniform grids.
//
// For each term the phasor z = e(f alpha_j) is advanced by the fixed rotation
// e(f step); every kResyncInterval points it is recomputed from the
// extended-precision phase, which bounds drift to ~1e-13. A slice of the grid
// is exactly one resync interval, so results do not depend on how slices are
// distributed over threads.

#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

#include "dhlab/errors.hpp"
#include "dhlab/expsums.hpp"

namespace dhlab {

namespace {

struct Rotations {
    std::vector<double> re, im;
};

Rotations rotations(const TermSet& terms, const GridSpec& spec) {
    const DoubleDouble delta = two_prod(spec.step, spec.scale);
    Rotations rot;
    rot.re.resize(terms.size());
    rot.im.resize(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        double r = phase_frac({terms.freq_hi[i], terms.freq_lo[i]}, delta);
        rot.re[i] = std::cos(kTwoPi * r);
        rot.im[i] = std::sin(kTwoPi * r);
    }
    return rot;
}

// Points [j0, j1) written to out[j - base].
void run_slice(const TermSet& terms, const GridSpec& spec, const Rotations& rot,
               std::int64_t j0, std::int64_t j1, std::int64_t base, std::span<cplx> out,
               std::vector<double>& zr, std::vector<double>& zi) {
    const std::size_t n = terms.size();
    const DoubleDouble a0 = spec.point(j0);
    for (std::size_t i = 0; i < n; ++i) {
        double r = phase_frac({terms.freq_hi[i], terms.freq_lo[i]}, a0);
        zr[i] = std::cos(kTwoPi * r);
        zi[i] = std::sin(kTwoPi * r);
    }
    const double* w = terms.weight.data();
    const double* rr = rot.re.data();
    const double* ri = rot.im.data();
    double* pr = zr.data();
    double* pi = zi.data();
    for (std::int64_t j = j0; j < j1; ++j) {
        double sr = 0.0, si = 0.0;
#pragma omp simd reduction(+ : sr, si)
        for (std::size_t i = 0; i < n; ++i) {
            const double a = pr[i], b = pi[i];
            sr += w[i] * a;
            si += w[i] * b;
            pr[i] = a * rr[i] - b * ri[i];
            pi[i] = a * ri[i] + b * rr[i];
        }
        out[static_cast<std::size_t>(j - base)] = {sr, si};
    }
}

std::int64_t slice_count(std::int64_t count) {
    return (count + kResyncInterval - 1) / kResyncInterval;
}

void run_slice(const TermSet& terms, const GridSpec& spec, const Rotations& rot, std::int64_t s,
               std::span<cplx> out, std::vector<double>& zr, std::vector<double>& zi) {
    const std::int64_t j0 = s * kResyncInterval;
    run_slice(terms, spec, rot, j0, std::min(j0 + kResyncInterval, spec.count), 0, out, zr, zi);
}

}  // namespace

void check_phase_budget(const TermSet& terms, const GridSpec& spec) {
    if (spec.count <= 0) return;
    double amax = std::max(std::fabs(spec.point(0).hi), std::fabs(spec.point(spec.count - 1).hi));
    if (terms.max_freq() * amax >= kPhaseBudget)
        throw BudgetExceeded(
            "eval_grid: max|alpha| * max frequency exceeds 2^52; use a smaller step*count");
}

void eval_grid_into(const TermSet& terms, const GridSpec& spec, std::span<cplx> out,
                    bool parallel) {
    check_phase_budget(terms, spec);
    if (spec.count <= 0) return;
    if (terms.empty()) {
        std::fill(out.begin(), out.begin() + spec.count, cplx{});
        return;
    }
    const Rotations rot = rotations(terms, spec);
    const std::int64_t slices = slice_count(spec.count);
    if (!parallel || slices == 1) {
        std::vector<double> zr(terms.size()), zi(terms.size());
        for (std::int64_t s = 0; s < slices; ++s) run_slice(terms, spec, rot, s, out, zr, zi);
        return;
    }
#pragma omp parallel
    {
        std::vector<double> zr(terms.size()), zi(terms.size());
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < slices; ++s) run_slice(terms, spec, rot, s, out, zr, zi);
    }
}

void eval_grid_range(const TermSet& terms, const GridSpec& spec, std::int64_t j0, std::int64_t m,
                     std::span<cplx> out) {
    if (m <= 0) return;
    if (terms.empty()) {
        std::fill(out.begin(), out.begin() + m, cplx{});
        return;
    }
    const Rotations rot = rotations(terms, spec);
    std::vector<double> zr(terms.size()), zi(terms.size());
    for (std::int64_t a = j0; a < j0 + m; a += kResyncInterval)
        run_slice(terms, spec, rot, a, std::min(a + kResyncInterval, j0 + m), j0, out, zr, zi);
}

SpectrumGrid eval_grid(const TermSet& terms, const GridSpec& spec) {
    SpectrumGrid g{spec, std::vector<cplx>(static_cast<std::size_t>(std::max<std::int64_t>(0, spec.count)))};
    eval_grid_into(terms, spec, g.values, true);
    return g;
}

SpectrumGrid eval_grid_serial(const TermSet& terms, const GridSpec& spec) {
    SpectrumGrid g{spec, std::vector<cplx>(static_cast<std::size_t>(std::max<std::int64_t>(0, spec.count)))};
    eval_grid_into(terms, spec, g.values, false);
    return g;
}

SpectrumGrid eval_grid_reference(const TermSet& terms, const GridSpec& spec) {
    check_phase_budget(terms, spec);
    SpectrumGrid g{spec, std::vector<cplx>(static_cast<std::size_t>(std::max<std::int64_t>(0, spec.count)))};
    for (std::int64_t j = 0; j < spec.count; ++j)
        g.values[static_cast<std::size_t>(j)] = evaluate(terms, spec.point(j));
    return g;
}

}  // namespace dhlab
