// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include "dhlab/arcs.hpp"
#include "dhlab/diophantine.hpp"
#include "dhlab/expsums.hpp"
#include "dhlab/harness.hpp"
#include "dhlab/norms.hpp"
#include "dhlab/solver.hpp"

using namespace dhlab;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kWeightedTarget = 10.34, kWeightedTol = 0.01;  // 1
constexpr double kDualityRel = 0.02;                             // 1
constexpr double kTime1 = 10, kTime2 = 30, kTime3 = 60, kTime7 = 60, kTime9 = 60;
constexpr double kOrthoRel = 5e-3;                               // 3
constexpr double kHuaGrowth = 1.189207115002721;                 // 4: 2^{1/4}
constexpr double kHuaOracleRel = 1e-2;                           // 4
constexpr double kPsiRel = 1e-15;                                // 5
constexpr double kGridDev = 1e-9;                                // 9

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool is_prime_td(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Outcome duality() {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemInstance in{1, 1, -1, 2, 0, 0.01, 0.01};
    const double X = 100, eta = 0.5;
    const auto table = sieve(1000);
    const auto sols = enumerate_solutions(in, X, eta, table);

    using T = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;
    std::vector<T> oracle, got;
    for (std::uint64_t p3 = 2; p3 * p3 <= 100; ++p3)
        for (std::uint64_t p1 = 1; p1 <= 100; ++p1)
            for (std::uint64_t p2 = 1; p2 <= 100; ++p2)
                if (is_prime_td(p1) && is_prime_td(p2) && is_prime_td(p3) && p3 * p3 >= 1 &&
                    std::fabs(static_cast<double>(p1 + p2) - static_cast<double>(p3 * p3)) <= eta)
                    oracle.emplace_back(p3, p1, p2);
    for (const auto& s : sols) got.emplace_back(s.p3, s.p1, s.p2);
    const std::vector<T> listed = {{2, 2, 2}, {3, 2, 7}, {3, 7, 2}, {5, 2, 23}, {5, 23, 2}, {7, 2, 47}, {7, 47, 2}};

    const double W = weighted_count(sols, eta);
    double W_oracle = 0;
    for (const auto& [p3, p1, p2] : oracle)
        W_oracle += std::log(static_cast<double>(p1)) * std::log(static_cast<double>(p2)) *
                    std::log(static_cast<double>(p3)) * eta;
    const auto I = I_numeric(in, X, eta, {-100, 100}, 0.0, table);
    const double tail = duality_tail_bound(in, X, table, 100);
    const double diff = std::fabs(I.value.real() - W);
    const double secs = seconds_since(t0);
    const bool ok = got == oracle && got == listed && std::fabs(W - kWeightedTarget) <= kWeightedTol &&
                    std::fabs(W - W_oracle) <= 1e-12 * W_oracle && diff <= kDualityRel * W + tail && secs < kTime1;
    return {ok, fmt("count=%zu weighted=%.6f oracle=%.6f I=%.6f |I-W|=%.4g (%.2f%%) tail=%.4g time=%.2fs", sols.size(), W,
                    W_oracle, I.value.real(), diff, 100 * diff / W, tail, secs)};
}

std::uint64_t brute_quadruples(std::int64_t N, double k, double gamma) {
    std::vector<long double> v;
    for (std::int64_t n = N + 1; n <= 2 * N; ++n)
        v.push_back(std::pow(static_cast<long double>(n), static_cast<long double>(k)));
    std::uint64_t c = 0;
    for (auto a : v)
        for (auto b : v)
            for (auto x : v)
                for (auto y : v) c += std::fabs(a + b - x - y) < gamma;
    return c;
}

Outcome quadruples() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c1 = count_quadruples(2, 2, 0.5).count, c2 = count_quadruples(2, 2, 8).count;
    std::mt19937_64 rng(20240601);
    const double ks[] = {1.5, 2, 2.5, 3};
    int mismatches = 0;
    for (int i = 0; i < 50; ++i) {
        const std::int64_t N = 1 + static_cast<std::int64_t>(rng() % 50);
        const double k = ks[rng() % 4];
        const double gamma = 0.01 + static_cast<double>(rng() % 100000) / 1000.0;
        mismatches += count_quadruples(N, k, gamma).count != brute_quadruples(N, k, gamma);
    }
    const double secs = seconds_since(t0);
    return {c1 == 6 && c2 == 14 && mismatches == 0 && secs < kTime2,
            fmt("B(2,2,0.5)=%llu B(2,2,8)=%llu random mismatches=%d/50 time=%.2fs", static_cast<unsigned long long>(c1),
                static_cast<unsigned long long>(c2), mismatches, secs)};
}

Outcome orthogonality() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = sieve(20000);
    double worst = 0;
    for (double k : {1.0, 2.0, 3.0})
        for (double X : {1e3, 1e4}) {
            const SumRange r{k, 0.25, X};
            double sq = 0;
            for (const auto& p : primes_in_range(r, table)) sq += p.log_p * p.log_p;
            const double v = moment_integral(MomentSum::Sk, 2, {0, 1}, r, table).value;
            worst = std::max(worst, std::fabs(v - sq) / sq);
        }
    const double secs = seconds_since(t0);
    return {worst <= kOrthoRel && secs < kTime3, fmt("max relative error=%.3g time=%.2fs", worst, secs)};
}

Outcome hua() {
    const auto table = sieve(5000);
    const double delta = ProblemInstance{}.delta;
    std::vector<double> ratios;
    std::string growth;
    bool ok = true;
    for (double X : {500.0, 1000.0, 2000.0, 4000.0}) {
        const auto rep = moment_integral(MomentSum::Sk, 8, {0, 1}, {3, delta, X}, table);
        ratios.push_back(rep.value / std::pow(X, 5.0 / 3));
        if (ratios.size() > 1) {
            const double g = ratios.back() / ratios[ratios.size() - 2];
            growth += fmt("%s%.3f", growth.empty() ? "" : ",", g);
            ok = ok && g <= kHuaGrowth;
        }
    }
    // 8-tuple oracle at X = 500: square of the 4-fold convolution of {p^3: log p}.
    const auto ps = primes_in_range({3, delta, 500}, table);
    std::map<std::uint64_t, double> a{{0, 1.0}};
    for (int s = 0; s < 4; ++s) {
        std::map<std::uint64_t, double> b;
        for (const auto& [v, w] : a)
            for (const auto& p : ps) b[v + p.p * p.p * p.p] += w * p.log_p;
        a.swap(b);
    }
    double oracle = 0;
    for (const auto& [_, w] : a) oracle += w * w;
    const double integral = moment_integral(MomentSum::Sk, 8, {0, 1}, {3, delta, 500}, table).value;
    const double rel = std::fabs(integral - oracle) / oracle;
    ok = ok && rel <= kHuaOracleRel;
    return {ok, fmt("growth per doubling=[%s] limit=%.4f; X=500 oracle rel error=%.2g (primes in window: %zu)",
                    growth.c_str(), kHuaGrowth, rel, ps.size())};
}

Outcome psi_table() {
    auto close = [](double a, double b) { return std::fabs(a - b) <= kPsiRel * std::fabs(b); };
    bool ok = close(psi(1.1), 4.0 / 33) && close(psi(2), 1.0 / 12) && close(psi(2.5), 1.0 / 30) && close(psi(3), 1.0 / 24);
    int violations = 0;
    for (int i = 1; 1 + i * 1e-3 < 4.0 / 3; ++i) {
        const double k = 1 + i * 1e-3;
        violations += !(psi(k) > phi(k));
    }
    ok = ok && violations == 0;
    return {ok, fmt("psi(1.1)=%.17g psi(2)=%.17g psi(2.5)=%.17g psi(3)=%.17g; psi<=phi on grid: %d", psi(1.1), psi(2.0),
                    psi(2.5), psi(3.0), violations)};
}

Outcome continued_fractions() {
    const auto l = convergents(std::sqrt(2.0), 6);
    const std::int64_t A[] = {1, 3, 7, 17, 41, 99}, Q[] = {1, 2, 5, 12, 29, 70};
    bool list_ok = l.items.size() == 6;
    for (std::size_t i = 0; list_ok && i < 6; ++i) list_ok = l.items[i].a == A[i] && l.items[i].q == Q[i];

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(0, 10), V(-0.7, 0.7);
    int counter = 0, positives = 0;
    for (int t = 0; t < 10000; ++t) {
        double x = U(rng);
        const auto q = static_cast<std::int64_t>(1 + rng() % 500);
        const auto a = static_cast<std::int64_t>(std::llround(x * static_cast<double>(q)));
        if (t % 2) x = (static_cast<double>(a) + V(rng) / static_cast<double>(q)) / static_cast<double>(q);
        if (std::gcd(a, q) != 1 || !legendre_check(a, q, x)) continue;
        ++positives;
        bool member = false;
        for (const auto& c : convergents(x, 40).items) member = member || (c.a == a && c.q == q);
        counter += !member;
    }
    std::uniform_real_distribution<double> Xd(-100, 100), Qd(1, 1e4);
    int witness_bad = 0;
    for (int t = 0; t < 1000; ++t) {
        const double x = Xd(rng), q = Qd(rng);
        const auto w = find_rational_witness(x, q);
        witness_bad += !(w.residual <= 1 / q && static_cast<double>(w.q) <= q && w.q >= 1);
    }
    return {list_ok && counter == 0 && witness_bad == 0,
            fmt("sqrt2 convergents %s; Legendre counterexamples=%d of %d positives in 10^4 trials; witness failures=%d/1000",
                list_ok ? "match" : "differ", counter, positives, witness_bad)};
}

Outcome theorem() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig c;
    c.instance = ProblemInstance{1, std::sqrt(2.0), -1, 2, 0, 0.1, 0.01};
    c.x_list = {343000};
    const auto rep = run_theorem_experiment(c);
    const double X = 343000, target = std::pow(X, -1.0 / 12 + 0.1);
    const auto& row = rep.rows.front();
    bool reverified = false;
    if (std::isfinite(row.eta_min)) {
        const quad r = exact_residual(c.instance, row.best.p1, row.best.p2, row.best.p3);
        reverified = r <= static_cast<quad>(target) && is_prime_u64(row.best.p1) && is_prime_u64(row.best.p2) &&
                     is_prime_u64(row.best.p3) && row.best_reverified;
    }
    const double secs = seconds_since(t0);
    const bool ok = std::isfinite(row.eta_min) && row.eta_min <= target && reverified && secs < kTime7;
    return {ok, fmt("X=343000 best=(%llu,%llu,%llu) residual=%.6g <= %.6g, count at eta_theory=%.4f: %zu, reverified=%d time=%.2fs",
                    static_cast<unsigned long long>(row.best.p1), static_cast<unsigned long long>(row.best.p2),
                    static_cast<unsigned long long>(row.best.p3), row.eta_min, target, row.eta_theory, row.count_theory,
                    reverified ? 1 : 0, secs)};
}

Outcome lemma_suite() {
    const ExperimentConfig c;
    const auto rep = run_lemma_suite(c);
    bool ok = rep.coverage_complete;
    std::string detail;
    for (const char* name : {"L1", "L2", "L3", "L4", "L5", "L6", "L7", "L9", "L10", "L12"}) {
        const Status s = rep.verdicts.at(name);
        ok = ok && s == Status::Pass;
        detail += fmt("%s%s=%s", detail.empty() ? "" : " ", name, status_name(s));
    }
    return {ok, detail + (rep.coverage_complete ? " coverage=complete" : " coverage=INCOMPLETE")};
}

Outcome grid_performance() {
    const auto table = sieve(100000);
    const TermSet terms = prime_terms({1.0, 1e-5, 1e5}, table);
    const GridSpec spec{0.1234, 1e-6, 1000000, 1.0};
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = eval_grid_serial(terms, spec);
    const double secs = seconds_since(t0);
    omp_set_num_threads(saved);
    std::mt19937_64 rng(99);
    double dev = 0;
    for (int i = 0; i < 100; ++i) {
        const auto j = static_cast<std::int64_t>(rng() % spec.count);
        dev = std::max(dev, std::abs(g.values[static_cast<std::size_t>(j)] - evaluate(terms, spec.point(j))));
    }
    return {terms.size() == 9592 && secs <= kTime9 && dev < kGridDev,
            fmt("primes=%zu points=1e6 time=%.2fs (1 thread) max |grid-direct|=%.3g", terms.size(), secs, dev)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path base = fs::temp_directory_path() / "dhlab_acceptance_det";
    fs::remove_all(base);
    bool same = true;
    std::string detail;
    for (const char* cmd : {"lemmas", "theorem"}) {
        for (const char* run : {"a", "b"}) {
            const std::string line = std::string(DHLAB_CLI) + " --seed 7 --out " + (base / run / cmd).string() + " " + cmd +
                                     " > /dev/null 2>&1";
            const int rc = std::system(line.c_str());
            (void)rc;  // lemmas exits 1 when any lemma fails; only the bytes matter here
        }
        for (const auto& e : fs::directory_iterator(base / "a" / cmd)) {
            if (e.path().extension() != ".csv") continue;
            const auto a = slurp(e.path()), b = slurp(base / "b" / cmd / e.path().filename());
            const bool eq = !a.empty() && a == b;
            same = same && eq;
            detail += fmt("%s%s/%s %s", detail.empty() ? "" : " ", cmd, e.path().filename().c_str(),
                          eq ? "identical" : "DIFFER");
        }
    }
    fs::remove_all(base);
    return {same && !detail.empty(), detail};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"duality identity", duality},
        {"quadruple counter", quadruples},
        {"orthogonality", orthogonality},
        {"Hua eighth moment", hua},
        {"psi table", psi_table},
        {"continued fractions", continued_fractions},
        {"desk-scale existence", theorem},
        {"lemma-bound ratio suite", lemma_suite},
        {"grid performance", grid_performance},
        {"determinism", determinism},
    };
    int failed = 0, i = 0;
    for (const auto& [name, fn] : criteria) {
        ++i;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("criterion %2d %-26s %s  %s\n", i, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", i - failed, i);
    return failed ? 1 : 0;
}
