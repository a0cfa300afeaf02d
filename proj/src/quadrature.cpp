#include <cmath>
#include <complex>

#include "dhlab/errors.hpp"
#include "dhlab/expsums.hpp"
#include "gauss_legendre.hpp"

namespace dhlab {

namespace {

using lcplx = std::complex<long double>;

constexpr int kMaxDepth = 24;
constexpr long double kMaxPanels = 5e7L;

struct Integrand {
    long double k;
    long double alpha;
    bool integral;

    lcplx operator()(long double t) const {
        long double tk;
        if (integral) {
            tk = 1;
            for (int e = static_cast<int>(k); e > 0; --e) tk *= t;
        } else {
            tk = std::pow(t, k);
        }
        long double ph = tk * alpha;
        ph -= std::floor(ph);
        const long double a = 6.283185307179586476925286766559L * ph;
        return {std::cos(a), std::sin(a)};
    }
};

lcplx gauss16(const Integrand& f, long double a, long double b) {
    const auto& rule = detail::gl16();
    const long double mid = (a + b) / 2, half = (b - a) / 2;
    lcplx s = 0;
    for (int i = 0; i < 16; ++i) s += rule.w[i] * f(mid + half * rule.x[i]);
    return s * half;
}

lcplx adaptive(const Integrand& f, long double a, long double b, lcplx whole, long double tol,
               int depth, long double& worst) {
    const long double m = (a + b) / 2;
    lcplx left = gauss16(f, a, m), right = gauss16(f, m, b);
    long double err = std::abs(left + right - whole);
    if (err <= tol) return left + right;
    if (depth >= kMaxDepth) {
        worst = std::max(worst, err);
        return left + right;
    }
    return adaptive(f, a, m, left, tol / 2, depth + 1, worst) +
           adaptive(f, m, b, right, tol / 2, depth + 1, worst);
}

}  // namespace

cplx eval_T_k(double alpha, const SumRange& range) {
    const long double k = range.k;
    const long double a = std::pow(static_cast<long double>(range.delta) * range.X, 1 / k);
    const long double b = std::pow(static_cast<long double>(range.X), 1 / k);
    const long double len = b - a;
    if (!(len > 0)) return {0.0, 0.0};
    if (alpha == 0.0) return {static_cast<double>(len), 0.0};

    // At most 1/8 of a cycle of e(t^k alpha) per panel.
    const long double speed = k * std::fabs(static_cast<long double>(alpha)) * std::pow(b, k - 1);
    const long double width = std::min(len, 1 / (8 * speed));
    const long double panels_ld = std::ceil(len / width);
    if (panels_ld > kMaxPanels)
        throw NumericFailure("eval_T_k: integrand too oscillatory for the panel budget",
                             static_cast<double>(panels_ld));
    const auto panels = static_cast<long long>(panels_ld);
    const long double h = len / panels;
    const long double tol_total = 1e-8L * len;
    const long double tol = tol_total / panels;

    Integrand f{k, static_cast<long double>(alpha), is_integral_exponent(range.k)};
    long double worst = 0;
    lcplx sum = 0, comp = 0;
    for (long long i = 0; i < panels; ++i) {
        const long double lo = a + h * i;
        const long double hi = (i + 1 == panels) ? b : a + h * (i + 1);
        lcplx piece = adaptive(f, lo, hi, gauss16(f, lo, hi), tol, 0, worst);
        lcplx y = piece - comp;
        lcplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if (worst > tol_total)
        throw NumericFailure("eval_T_k: adaptive quadrature did not converge",
                             static_cast<double>(worst));
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace dhlab
