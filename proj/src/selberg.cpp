#include <algorithm>
#include <cmath>
#include <vector>

#include "dhlab/errors.hpp"
#include "dhlab/extended.hpp"
#include "dhlab/norms.hpp"
#include "gauss_legendre.hpp"

namespace dhlab {

namespace {

// c(x) = (x + h)^{1/k} - x^{1/k}
struct Correction {
    long double h, inv_k;
    long double operator()(long double x) const {
        return std::pow(x + h, inv_k) - std::pow(x, inv_k);
    }
};

// (int c, int c^2) over [a, b] by 16-point Gauss-Legendre.
std::pair<long double, long double> moments(const Correction& c, long double a, long double b) {
    const auto& rule = detail::gl16();
    const long double mid = (a + b) / 2, half = (b - a) / 2;
    long double s1 = 0, s2 = 0;
    for (int i = 0; i < 16; ++i) {
        const long double v = c(mid + half * rule.x[i]);
        s1 += rule.w[i] * v;
        s2 += rule.w[i] * v * v;
    }
    return {s1 * half, s2 * half};
}

}  // namespace

double selberg_integral(const SumRange& range, double h, const PrimeTable& table) {
    if (!(h > 0)) throw DomainError("selberg_integral: h must be > 0");
    const double X = range.X, k = range.k;
    const double top = std::pow(2 * X + h, 1 / k);
    if (top > static_cast<double>(table.limit()))
        throw InsufficientTable("selberg_integral: table limit below (2X+h)^{1/k}", top);

    // Primes whose k-th power can enter a window (x, x+h] with x in [X, 2X].
    struct Entry {
        quad pk;
        long double logp;
    };
    std::vector<Entry> entries;
    const auto first = static_cast<std::uint64_t>(std::max(0.0, std::floor(std::pow(X, 1 / k)) - 1));
    auto ps = table.primes();
    for (auto it = std::lower_bound(ps.begin(), ps.end(), first); it != ps.end(); ++it) {
        const quad pk = quad_pow(*it, k);
        if (pk > static_cast<quad>(2 * X) + h) break;
        if (pk > static_cast<quad>(X)) entries.push_back({pk, std::log(static_cast<long double>(*it))});
    }
    std::vector<long double> prefix(entries.size() + 1, 0);
    for (std::size_t i = 0; i < entries.size(); ++i) prefix[i + 1] = prefix[i] + entries[i].logp;

    // D(x) = sum of log p over x < p^k <= x + h changes only at p^k and p^k - h.
    std::vector<long double> cuts{X, 2 * X};
    for (const auto& e : entries) {
        for (quad c : {e.pk, e.pk - h}) {
            const auto v = static_cast<long double>(c);
            if (v > X && v < 2 * X) cuts.push_back(v);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const Correction corr{static_cast<long double>(h), 1 / static_cast<long double>(k)};
    const long double max_piece = X / 64.0L;
    long double total = 0, comp = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const long double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        const quad m = (static_cast<quad>(a) + static_cast<quad>(b)) / 2;
        auto lo = std::upper_bound(entries.begin(), entries.end(), m,
                                   [](quad v, const Entry& e) { return v < e.pk; });
        auto hi = std::upper_bound(entries.begin(), entries.end(), m + h,
                                   [](quad v, const Entry& e) { return v < e.pk; });
        const long double D = prefix[hi - entries.begin()] - prefix[lo - entries.begin()];

        const int parts = std::max(1, static_cast<int>(std::ceil((b - a) / max_piece)));
        long double ic = 0, ic2 = 0;
        for (int s = 0; s < parts; ++s) {
            const long double pa = a + (b - a) * s / parts;
            const long double pb = (s + 1 == parts) ? b : a + (b - a) * (s + 1) / parts;
            auto [m1, m2] = moments(corr, pa, pb);
            ic += m1;
            ic2 += m2;
        }
        const long double piece = D * D * (b - a) - 2 * D * ic + ic2;
        const long double y = piece - comp;
        const long double t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    return static_cast<double>(total);
}

}  // namespace dhlab
