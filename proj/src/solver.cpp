#include "dhlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "dhlab/errors.hpp"
#include "dhlab/report.hpp"
#include "integrate.hpp"
#include "json.hpp"

namespace dhlab {

bool ProblemInstance::same_sign() const {
    return (lambda1 > 0 && lambda2 > 0 && lambda3 > 0) || (lambda1 < 0 && lambda2 < 0 && lambda3 < 0);
}

bool ProblemInstance::sign_infeasible() const {
    return (lambda1 > 0 && lambda2 > 0 && lambda3 > 0 && omega < 0) ||
           (lambda1 < 0 && lambda2 < 0 && lambda3 < 0 && omega > 0);
}

void ProblemInstance::validate() const {
    if (lambda1 == 0 || lambda2 == 0 || lambda3 == 0)
        throw DomainError("ProblemInstance: lambdas must be nonzero");
    if (!(k > 1 && k <= 3)) throw DomainError("ProblemInstance: k must lie in (1, 3]");
    if (!(delta > 0 && delta < 1)) throw DomainError("ProblemInstance: delta must lie in (0, 1)");
    if (!(epsilon > 0)) throw DomainError("ProblemInstance: epsilon must be > 0");
}

quad exact_residual(const ProblemInstance& inst, std::uint64_t p1, std::uint64_t p2,
                    std::uint64_t p3) {
    const quad v = static_cast<quad>(inst.lambda1) * static_cast<quad>(p1) +
                   static_cast<quad>(inst.lambda2) * static_cast<quad>(p2) +
                   static_cast<quad>(inst.lambda3) * quad_pow(p3, inst.k) -
                   static_cast<quad>(inst.omega);
    return v < 0 ? -v : v;
}

std::vector<SolutionRecord> enumerate_solutions(const ProblemInstance& inst, double X, double eta,
                                                const PrimeTable& table) {
    inst.validate();
    if (!(eta >= 0)) throw DomainError("enumerate_solutions: eta must be >= 0");
    const auto linear = primes_in_range({1.0, inst.delta, X}, table);
    const auto powers = primes_in_range({inst.k, inst.delta, X}, table);

    struct Value {
        double v;
        std::size_t idx;
    };
    std::vector<Value> second;
    second.reserve(linear.size());
    for (std::size_t i = 0; i < linear.size(); ++i)
        second.push_back({inst.lambda2 * static_cast<double>(linear[i].p), i});
    std::sort(second.begin(), second.end(), [](const Value& a, const Value& b) { return a.v < b.v; });

    const quad eta_q = eta;
    std::vector<std::vector<SolutionRecord>> per_p3(powers.size());

#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < powers.size(); ++t) {
        const auto& p3 = powers[t];
        const double target = inst.omega - inst.lambda3 * static_cast<double>(quad_pow(p3.p, inst.k));
        auto& out = per_p3[t];
        std::vector<SolutionRecord> hits;
        for (const auto& p1 : linear) {
            const double c = target - inst.lambda1 * static_cast<double>(p1.p);
            const double guard = 1e-9 * (std::fabs(target) + std::fabs(c) + 1.0) + 1e-14 * eta;
            auto lo = std::lower_bound(second.begin(), second.end(), c - eta - guard,
                                       [](const Value& a, double v) { return a.v < v; });
            hits.clear();
            for (auto it = lo; it != second.end() && it->v <= c + eta + guard; ++it) {
                const auto& p2 = linear[it->idx];
                const quad r = exact_residual(inst, p1.p, p2.p, p3.p);
                if (r > eta_q) continue;
                SolutionRecord s;
                s.p1 = p1.p;
                s.p2 = p2.p;
                s.p3 = p3.p;
                s.residual = static_cast<double>(r);
                s.weight = p1.log_p * p2.log_p * p3.log_p;
                const quad gap = eta_q - r;
                s.near_boundary = gap <= 1e-14 * eta_q;
                hits.push_back(s);
            }
            std::sort(hits.begin(), hits.end(),
                      [](const SolutionRecord& a, const SolutionRecord& b) { return a.p2 < b.p2; });
            out.insert(out.end(), hits.begin(), hits.end());
        }
    }

    std::vector<SolutionRecord> all;
    for (auto& v : per_p3) all.insert(all.end(), v.begin(), v.end());
    return all;
}

double weighted_count(const std::vector<SolutionRecord>& solutions, double eta) {
    CompensatedSum s;
    for (const auto& r : solutions) s.add(r.weight * std::max(0.0, eta - r.residual));
    return s.value();
}

IntegralResult I_numeric(const ProblemInstance& inst, double X, double eta, Interval iv,
                         double step, const PrimeTable& table) {
    inst.validate();
    if (!(eta > 0 && eta < 1)) throw DomainError("I_numeric: eta must lie in (0, 1)");
    if (!(iv.hi > iv.lo)) throw DomainError("I_numeric: empty interval");
    const double lmax = std::max({std::fabs(inst.lambda1), std::fabs(inst.lambda2), std::fabs(inst.lambda3)});
    const double limit = 1.0 / (kOversample * X * lmax);
    if (step == 0) step = limit;
    if (step > limit * (1 + 1e-12)) throw StepTooCoarse("I_numeric: step exceeds 1/(64 X max|lambda|)", limit);

    const TermSet s1 = prime_terms({1.0, inst.delta, X}, table);
    const TermSet sk = prime_terms({inst.k, inst.delta, X}, table);
    const auto grid = detail::TrapezoidGrid::covering(iv.lo, iv.hi, step);
    const std::int64_t n = grid.points();
    const GridSpec g1{grid.lo, grid.h, n, inst.lambda1};
    const GridSpec g2{grid.lo, grid.h, n, inst.lambda2};
    const GridSpec g3{grid.lo, grid.h, n, inst.lambda3};
    const GridSpec base{grid.lo, grid.h, n, 1.0};
    check_phase_budget(s1, g1);
    check_phase_budget(s1, g2);
    check_phase_budget(sk, g3);

    const std::int64_t panels = (n + detail::kPanelPoints - 1) / detail::kPanelPoints;
    std::vector<cplx> partial(static_cast<std::size_t>(panels));
    const DoubleDouble omega(inst.omega);
    const KernelParams kp{eta};
#pragma omp parallel
    {
        const auto P = static_cast<std::size_t>(detail::kPanelPoints);
        std::vector<cplx> a(P), b(P), c(P);
#pragma omp for schedule(static)
        for (std::int64_t panel = 0; panel < panels; ++panel) {
            const std::int64_t j0 = panel * detail::kPanelPoints;
            const std::int64_t m = std::min(detail::kPanelPoints, n - j0);
            const auto M = static_cast<std::size_t>(m);
            eval_grid_range(s1, g1, j0, m, {a.data(), M});
            eval_grid_range(s1, g2, j0, m, {b.data(), M});
            eval_grid_range(sk, g3, j0, m, {c.data(), M});
            cplx acc = 0;
            for (std::int64_t t = 0; t < m; ++t) {
                const std::int64_t j = j0 + t;
                const DoubleDouble alpha = base.point(j);
                const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
                const cplx twist = std::conj(unit_phasor(phase_frac(omega, alpha)));
                const auto u = static_cast<std::size_t>(t);
                acc += w * kernel_K(alpha.value(), kp) * a[u] * b[u] * c[u] * twist;
            }
            partial[static_cast<std::size_t>(panel)] = acc;
        }
    }
    cplx total = 0;
    for (const auto& v : partial) total += v;
    return {total * grid.h, grid.h, n};
}

double duality_tail_bound(const ProblemInstance& inst, double X, const PrimeTable& table, double B) {
    const double s1 = prime_terms({1.0, inst.delta, X}, table).total_weight();
    const double sk = prime_terms({inst.k, inst.delta, X}, table).total_weight();
    return s1 * s1 * sk / B;
}

MainTermScan main_term_scan(const ProblemInstance& inst, const std::vector<double>& xs,
                            const PrimeTable& table) {
    MainTermScan scan;
    scan.degenerate = inst.same_sign();
    double lo = 0, hi = 0;
    for (double X : xs) {
        const ArcDecomposition d = choose_parameters(inst, X);
        const auto res = I_numeric(inst, X, d.eta, {-d.major.hi, d.major.hi}, 0.0, table);
        MainTermRow row;
        row.X = X;
        row.eta = d.eta;
        row.I_major = res.value.real();
        row.I_major_imag = res.value.imag();
        row.eta2 = d.eta * d.eta;
        row.scale = std::pow(X, 1 + 1 / inst.k);
        row.ratio = row.I_major / (row.eta2 * row.scale);
        if (scan.rows.empty()) lo = hi = row.ratio;
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
        scan.rows.push_back(row);
    }
    scan.bounded_below = !scan.rows.empty() && lo > 0 && lo >= 0.1 * hi;
    return scan;
}

void write_solutions_csv(std::ostream& os, const std::vector<SolutionRecord>& solutions) {
    os << "p1,p2,p3,residual,weight\n";
    for (const auto& s : solutions)
        os << s.p1 << ',' << s.p2 << ',' << s.p3 << ',' << fmt_double(s.residual) << ','
           << fmt_double(s.weight) << '\n';
}

std::string RunSummary::to_json() const {
    nlohmann::json j;
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    j["X"] = num(X);
    j["eta"] = num(eta);
    j["count"] = count;
    j["weighted_count"] = num(weighted_count);
    j["I_real"] = num(I_real);
    j["I_imag"] = num(I_imag);
    j["tail_bound"] = num(tail_bound);
    return j.dump();
}

}  // namespace dhlab
