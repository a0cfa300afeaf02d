#include "dhlab/diophantine.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "dhlab/errors.hpp"
#include "dhlab/expsums.hpp"
#include "dhlab/report.hpp"

namespace dhlab {

namespace {

constexpr int kMaxDepth = 40;
constexpr int kMaxDenominatorBits = 62;

/// x as num / 2^shift exactly (up to 62 fractional bits).
struct Dyadic {
    i128 num = 0;
    i128 den = 1;
};

Dyadic to_dyadic(double x) {
    if (!std::isfinite(x) || std::fabs(x) >= 0x1p62)
        throw DomainError("continued fraction: |x| must be finite and below 2^62");
    int e = 0;
    const double f = std::frexp(x, &e);  // x = f 2^e, |f| in [0.5, 1)
    const auto mant = static_cast<std::int64_t>(std::ldexp(f, 53));
    const int shift = 53 - e;  // x = mant / 2^shift
    Dyadic d;
    if (shift <= 0) {
        d.num = static_cast<i128>(mant) << -shift;
        d.den = 1;
    } else if (shift <= kMaxDenominatorBits) {
        d.num = mant;
        d.den = static_cast<i128>(1) << shift;
    } else {
        // Keep 62 fractional bits; only reached for |x| < 2^-9.
        d.num = static_cast<i128>(std::llround(std::ldexp(f, 53 - (shift - kMaxDenominatorBits))));
        d.den = static_cast<i128>(1) << kMaxDenominatorBits;
    }
    return d;
}

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

double residual_of(const Dyadic& d, i128 a, i128 q) {
    const i128 diff = abs128(q * d.num - a * d.den);
    return static_cast<double>(static_cast<long double>(diff) / static_cast<long double>(d.den));
}

/// Convergents of the exact dyadic value; stops at depth, termination, or
/// when q would exceed qcap.
ConvergentList expand(double x, int depth, i128 qcap) {
    const Dyadic d = to_dyadic(x);
    ConvergentList out;
    i128 num = d.num, den = d.den;
    i128 p1 = 1, q1 = 0;  // previous convergent
    i128 p2 = 0, q2 = 1;  // the one before
    for (int i = 0; i < depth; ++i) {
        const i128 a = floor_div(num, den);
        const i128 p = a * p1 + p2;
        const i128 q = a * q1 + q2;
        if (q > qcap) {
            out.truncated = true;
            return out;
        }
        out.items.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(q), i,
                             residual_of(d, p, q)});
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = q;
        const i128 rem = num - a * den;
        if (rem == 0) {
            out.terminated = true;
            out.truncated = (i + 1 < depth);
            return out;
        }
        num = den;
        den = rem;
    }
    return out;
}

i128 reliable_q(double x) {
    const double cap = 0x1p25 / std::sqrt(std::max(1.0, std::fabs(x)));
    return static_cast<i128>(cap);
}

}  // namespace

ConvergentList convergents(double x, int n) {
    if (n < 1 || n > kMaxDepth) throw DomainError("convergents: n must be in [1, 40]");
    return expand(x, n, reliable_q(x));
}

double approximation_residual(std::int64_t a, std::int64_t q, double x) {
    return residual_of(to_dyadic(x), a, q);
}

bool legendre_check(std::int64_t a, std::int64_t q, double x) {
    if (q < 1) throw DomainError("legendre_check: q must be >= 1");
    if (std::gcd(a, q) != 1) throw DomainError("legendre_check: gcd(a, q) must be 1");
    const Dyadic d = to_dyadic(x);
    if (q < (std::int64_t{1} << 30)) {
        const i128 diff = abs128(static_cast<i128>(q) * d.num - static_cast<i128>(a) * d.den);
        return 2 * static_cast<i128>(q) * diff < d.den;
    }
    const quad diff = static_cast<quad>(q) * static_cast<quad>(x) - static_cast<quad>(a);
    return (diff < 0 ? -diff : diff) * 2 * static_cast<quad>(q) < 1;
}

RationalWitness find_rational_witness(double x, double Q) {
    if (!(Q >= 1)) throw DomainError("find_rational_witness: Q must be >= 1");
    const auto qcap = static_cast<i128>(std::min(std::floor(Q), 0x1p62 / std::max(1.0, std::fabs(x))));
    const ConvergentList list = expand(x, kMaxDepth, qcap);
    RationalWitness w;
    if (list.items.empty()) {
        w.a = static_cast<std::int64_t>(std::floor(x));
        w.q = 1;
        w.residual = approximation_residual(w.a, 1, x);
    } else {
        const Convergent& c = list.items.back();
        w.a = c.a;
        w.q = c.q;
        w.residual = c.residual;
    }
    w.flagged = w.residual > 1.0 / Q;
    return w;
}

bool looks_rational(double x, std::int64_t max_q) {
    const ConvergentList list = expand(x, kMaxDepth, static_cast<i128>(max_q));
    for (const auto& c : list.items)
        if (static_cast<double>(c.a) / static_cast<double>(c.q) == x) return true;
    return false;
}

XSequence x_sequence(double lambda1, double lambda2, int count, double cap) {
    if (lambda2 == 0.0) throw DomainError("x_sequence: lambda2 must be nonzero");
    const double x = lambda1 / lambda2;
    XSequence seq;
    seq.rational_flag = looks_rational(x);
    const ConvergentList list = expand(x, kMaxDepth, reliable_q(x));
    std::int64_t last = 0;
    for (const auto& c : list.items) {
        if (static_cast<int>(seq.entries.size()) >= count) break;
        if (c.q <= last) continue;
        const double X = std::pow(static_cast<double>(c.q), 3);
        if (X > cap) break;
        seq.entries.push_back({c.q, X});
        last = c.q;
    }
    return seq;
}

double vaughan_ratio(double alpha, std::int64_t a, std::int64_t q, const SumRange& range,
                     const PrimeTable& table) {
    if (q < 1 || std::gcd(a, q) != 1) throw DomainError("vaughan_ratio: need q >= 1, gcd(a,q) = 1");
    const long double off = std::fabs(static_cast<long double>(alpha) -
                                      static_cast<long double>(a) / static_cast<long double>(q));
    if (!(off < 1.0L / (static_cast<long double>(q) * q)))
        throw DomainError("vaughan_ratio: |alpha - a/q| must be below 1/q^2");
    const SumRange r1{1.0, range.delta, range.X};
    const double X = range.X, L = std::log(X), qd = static_cast<double>(q);
    const double bound = (X / std::sqrt(qd) + std::sqrt(X * qd) + std::pow(X, 0.8)) * L * L * L * L;
    return std::abs(eval_S_k(alpha, r1, table)) / bound;
}

double short_interval_ratio(const SumRange& range, const PrimeTable& table, int samples) {
    const SumRange r1{1.0, range.delta, range.X};
    const TermSet terms = prime_terms(r1, table);
    const double X = range.X, L = std::log(X);
    const double lo = std::log(1 / X), hi = std::log(std::pow(X, -0.6));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double alpha = std::exp(lo + (hi - lo) * i / std::max(1, samples - 1));
        const double ratio = std::abs(evaluate(terms, alpha)) / (std::sqrt(X / alpha) * L * L * L * L);
        worst = std::max(worst, ratio);
    }
    return worst;
}

void write_convergents_csv(std::ostream& os, const ConvergentList& list) {
    os << "index,a,q,residual\n";
    for (const auto& c : list.items)
        os << c.index << ',' << c.a << ',' << c.q << ',' << fmt_double(c.residual) << '\n';
}

}  // namespace dhlab
