#pragma once

// Chunked trapezoid integration of functionals of a trigonometric sum on a
// uniform grid. Panels are evaluated independently (in parallel) and their
// sums combined in panel order, so the result is independent of the thread
// count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dhlab/expsums.hpp"

namespace dhlab::detail {

inline constexpr std::int64_t kPanelPoints = 64 * kResyncInterval;

/// Trapezoid nodes lo + j h, j = 0..intervals.
struct TrapezoidGrid {
    double lo = 0.0;
    double h = 0.0;
    std::int64_t intervals = 0;

    static TrapezoidGrid covering(double lo, double hi, double max_step) {
        TrapezoidGrid g;
        g.lo = lo;
        const double len = hi - lo;
        if (!(len > 0)) return g;
        g.intervals = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(len / max_step)));
        g.h = len / static_cast<double>(g.intervals);
        return g;
    }
    std::int64_t points() const { return intervals > 0 ? intervals + 1 : 0; }
};

/// sum_j w_j f(alpha_j, F(scale alpha_j)) with trapezoid weights w_j.
template <class F>
double trapezoid(const TermSet& terms, const TrapezoidGrid& grid, double scale, F&& f) {
    const std::int64_t n = grid.points();
    if (n == 0) return 0.0;
    const std::int64_t panels = (n + kPanelPoints - 1) / kPanelPoints;
    std::vector<double> partial(static_cast<std::size_t>(panels), 0.0);
    check_phase_budget(terms, GridSpec{grid.lo, grid.h, n, scale});
#pragma omp parallel
    {
        std::vector<cplx> buf(static_cast<std::size_t>(kPanelPoints));
#pragma omp for schedule(static)
        for (std::int64_t panel = 0; panel < panels; ++panel) {
            const std::int64_t j0 = panel * kPanelPoints;
            const std::int64_t m = std::min(kPanelPoints, n - j0);
            std::span<cplx> out(buf.data(), static_cast<std::size_t>(m));
            eval_grid_range(terms, GridSpec{grid.lo, grid.h, n, scale}, j0, m, out);
            double acc = 0.0;
            for (std::int64_t t = 0; t < m; ++t) {
                const std::int64_t j = j0 + t;
                double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
                acc += w * f(grid.lo + grid.h * static_cast<double>(j), out[static_cast<std::size_t>(t)]);
            }
            partial[static_cast<std::size_t>(panel)] = acc;
        }
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total * grid.h;
}

}  // namespace dhlab::detail
