#include "dhlab/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dhlab/errors.hpp"
#include "dhlab/report.hpp"

namespace dhlab {

double TermSet::max_freq() const {
    double m = 0.0;
    for (std::size_t i = 0; i < freq_hi.size(); ++i) m = std::max(m, std::fabs(freq_hi[i]));
    return m;
}

double TermSet::total_weight() const {
    CompensatedSum s;
    for (double w : weight) s.add(w);
    return s.value();
}

void TermSet::push(DoubleDouble f, double w) {
    freq_hi.push_back(f.hi);
    freq_lo.push_back(f.lo);
    weight.push_back(w);
}

namespace {

DoubleDouble frequency(std::uint64_t n, double k) {
    return DoubleDouble::from_quad(quad_pow(n, k));
}

}  // namespace

TermSet prime_terms(const SumRange& range, const PrimeTable& table) {
    TermSet t;
    for (const auto& pt : primes_in_range(range, table)) t.push(frequency(pt.p, range.k), pt.log_p);
    return t;
}

TermSet integer_terms(const SumRange& range) {
    TermSet t;
    for (auto n : integers_in_range(range)) t.push(frequency(n, range.k), 1.0);
    return t;
}

TermSet difference_terms(const SumRange& range, const PrimeTable& table) {
    TermSet t;
    for (auto n : integers_in_range(range)) {
        if (n > table.limit())
            throw InsufficientTable("difference_terms: table limit below X^{1/k}", double(n));
        double w = is_prime_u64(n) ? std::log(static_cast<double>(n)) - 1.0 : -1.0;
        t.push(frequency(n, range.k), w);
    }
    return t;
}

cplx evaluate(const TermSet& terms, DoubleDouble alpha) {
    if (terms.max_freq() * std::fabs(alpha.hi) >= kPhaseBudget)
        throw BudgetExceeded("evaluate: |f alpha| beyond the extended-precision phase budget");
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        double r = phase_frac({terms.freq_hi[i], terms.freq_lo[i]}, alpha);
        double a = kTwoPi * r;
        re += terms.weight[i] * std::cos(a);
        im += terms.weight[i] * std::sin(a);
    }
    return {re, im};
}

cplx eval_S_k(double alpha, const SumRange& range, const PrimeTable& table) {
    return evaluate(prime_terms(range, table), alpha);
}

cplx eval_U_k(double alpha, const SumRange& range) {
    return evaluate(integer_terms(range), alpha);
}

DoubleDouble GridSpec::point(std::int64_t j) const {
    DoubleDouble t = DoubleDouble(alpha0) + two_prod(step, static_cast<double>(j));
    return t * scale;
}

SpectrumGrid eval_grid(SumKind kind, const SumRange& range, const PrimeTable& table,
                       const GridSpec& spec) {
    return eval_grid(kind == SumKind::S ? prime_terms(range, table) : integer_terms(range), spec);
}

double kernel_K(double alpha, KernelParams p) {
    if (std::fabs(alpha) < 1e-12 * p.eta) return p.eta * p.eta;
    constexpr double pi = kTwoPi / 2;
    double s = std::sin(pi * alpha * p.eta) / (pi * alpha);
    return s * s;
}

double kernel_Khat(double alpha, KernelParams p) { return std::max(0.0, p.eta - std::fabs(alpha)); }

void write_grid_csv(std::ostream& os, const SpectrumGrid& grid) {
    os << "alpha,re,im,abs\n";
    for (std::int64_t j = 0; j < grid.spec.count; ++j) {
        const cplx& v = grid.values[static_cast<std::size_t>(j)];
        os << fmt_double(grid.alpha(j)) << ',' << fmt_double(v.real()) << ','
           << fmt_double(v.imag()) << ',' << fmt_double(std::abs(v)) << '\n';
    }
}

}  // namespace dhlab
