#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "dhlab/errors.hpp"
#include "dhlab/solver.hpp"
#include "json.hpp"

using namespace dhlab;

namespace {

using Triple = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;

// Every prime triple in the windows, residual in long double.
std::vector<Triple> triple_loop(const ProblemInstance& in, double X, double eta) {
    std::vector<std::uint64_t> lin, pw;
    for (std::uint64_t n = 2; n <= static_cast<std::uint64_t>(X); ++n) {
        bool prime = true;
        for (std::uint64_t d = 2; d * d <= n; ++d) prime = prime && n % d;
        if (!prime) continue;
        if (in.delta * X <= n) lin.push_back(n);
        const long double nk = std::pow(static_cast<long double>(n), static_cast<long double>(in.k));
        if (in.delta * X <= nk && nk <= X) pw.push_back(n);
    }
    std::vector<Triple> out;
    for (auto p3 : pw)
        for (auto p1 : lin)
            for (auto p2 : lin) {
                const long double r = in.lambda1 * static_cast<long double>(p1) + in.lambda2 * static_cast<long double>(p2) +
                                      in.lambda3 * std::pow(static_cast<long double>(p3), static_cast<long double>(in.k)) - in.omega;
                if (std::fabs(r) <= eta) out.emplace_back(p3, p1, p2);
            }
    return out;
}

std::vector<Triple> keys(const std::vector<SolutionRecord>& s) {
    std::vector<Triple> out;
    for (const auto& r : s) out.emplace_back(r.p3, r.p1, r.p2);
    return out;
}

const ProblemInstance kTiny{1, 1, -1, 2, 0, 0.01, 0.01};

}  // namespace

TEST_CASE("the tiny instance: seven ordered solutions") {
    const auto t = sieve(1000);
    const auto sols = enumerate_solutions(kTiny, 100, 0.5, t);
    const auto oracle = triple_loop(kTiny, 100, 0.5);
    CHECK(keys(sols) == oracle);
    REQUIRE(sols.size() == 7);
    const std::vector<Triple> expect = {{2, 2, 2}, {3, 2, 7}, {3, 7, 2}, {5, 2, 23}, {5, 23, 2}, {7, 2, 47}, {7, 47, 2}};
    CHECK(keys(sols) == expect);
    double w = 0;
    for (const auto& s : sols) {
        CHECK(s.residual == 0.0);
        CHECK(s.weight == doctest::Approx(std::log(s.p1) * std::log(s.p2) * std::log(s.p3)));
        w += 0.5 * s.weight;
    }
    CHECK(weighted_count(sols, 0.5) == doctest::Approx(w).epsilon(1e-14));
    CHECK(weighted_count(sols, 0.5) == doctest::Approx(10.34).epsilon(0.01 / 10.34));
    CHECK(weighted_count(sols, 1.0) == doctest::Approx(2 * w));
    CHECK(weighted_count({}, 0.5) == 0.0);
    CHECK(weighted_count(sols, 0.5) <= 0.5 * std::pow(std::log(100.0), 3) * sols.size());
}

TEST_CASE("enumeration matches the triple loop on irrational instances") {
    const auto t = sieve(5000);
    const ProblemInstance cases[] = {{1, std::sqrt(2.0), -1, 2, 0, 0.1, 0.01},
                                     {-std::sqrt(3.0), 1, 1, 2, 2.5, 0.1, 0.01},
                                     {1, std::numbers::pi, -2, 1.5, 0.3, 0.2, 0.01},
                                     {1, std::sqrt(5.0), -1, 3, 0, 0.05, 0.01}};
    for (const auto& in : cases) {
        for (double eta : {0.05, 0.3, 1.0}) {
            const auto sols = enumerate_solutions(in, 800, eta, t);
            CHECK(keys(sols) == triple_loop(in, 800, eta));
            for (const auto& s : sols) {
                REQUIRE(exact_residual(in, s.p1, s.p2, s.p3) <= static_cast<quad>(eta));
                REQUIRE(is_prime_u64(s.p1));
                REQUIRE(in_window(s.p3, {in.k, in.delta, 800}));
            }
        }
    }
}

TEST_CASE("empty below the smallest residual; nested in eta") {
    const auto t = sieve(5000);
    const ProblemInstance in{1, std::sqrt(2.0), -1, 2, 0, 0.1, 0.01};
    const auto wide = enumerate_solutions(in, 3000, 2.0, t);
    REQUIRE(!wide.empty());
    double rmin = INFINITY;
    for (const auto& s : wide) rmin = std::min(rmin, s.residual);
    CHECK(enumerate_solutions(in, 3000, rmin * 0.999, t).empty());
    auto prev = keys(enumerate_solutions(in, 3000, 0.01, t));
    for (double eta : {0.05, 0.2, 1.0, 2.0}) {
        auto cur = keys(enumerate_solutions(in, 3000, eta, t));
        REQUIRE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        prev = cur;
    }
}

TEST_CASE("swapping lambda1 and lambda2 transposes p1 and p2") {
    const auto t = sieve(5000);
    const ProblemInstance a{1, std::sqrt(2.0), -1, 2, 0.7, 0.1, 0.01};
    ProblemInstance b = a;
    std::swap(b.lambda1, b.lambda2);
    auto sa = keys(enumerate_solutions(a, 2000, 0.4, t));
    auto sb = enumerate_solutions(b, 2000, 0.4, t);
    std::vector<Triple> swapped;
    for (const auto& s : sb) swapped.emplace_back(s.p3, s.p2, s.p1);
    std::sort(swapped.begin(), swapped.end());
    CHECK(sa == swapped);
}

TEST_CASE("exact residual needs more than double precision") {
    // lambda3 p3^k with p3^k ~ 1e15: doubles lose the fractional part.
    const ProblemInstance in{1, 1, -1, 3, 0.25, 0.1, 0.01};
    const quad r = exact_residual(in, 1000003, 1000033, 100003);
    const quad expect = static_cast<quad>(1000003) + 1000033 - static_cast<quad>(100003) * 100003 * 100003 - static_cast<quad>(0.25);
    CHECK(r == (expect < 0 ? -expect : expect));
}

TEST_CASE("duality: the integral over [-B, B] recovers the weighted count") {
    const auto t = sieve(1000);
    const double eta = 0.5;
    const double W = weighted_count(enumerate_solutions(kTiny, 100, eta, t), eta);
    for (double B : {10 / eta, 50 / eta, 100.0}) {
        const auto I = I_numeric(kTiny, 100, eta, {-B, B}, 0.0, t);
        const double tail = duality_tail_bound(kTiny, 100, t, B);
        CHECK(std::fabs(I.value.real() - W) <= 0.02 * W + tail);
        CHECK(std::fabs(I.value.imag()) <= 1e-6 * std::fabs(I.value.real()));
    }
    // The bound is loose; the actual agreement at B = 100 is far better.
    const auto I = I_numeric(kTiny, 100, eta, {-100, 100}, 0.0, t);
    CHECK(I.value.real() == doctest::Approx(W).epsilon(0.02));
    CHECK_THROWS_AS(I_numeric(kTiny, 100, eta, {-1, 1}, 1.0 / (32 * 100), t), StepTooCoarse);
}

TEST_CASE("duality on an irrational instance with nonzero residuals") {
    const auto t = sieve(1000);
    const ProblemInstance in{1, std::sqrt(2.0), -1, 2, 0, 0.1, 0.01};
    const double eta = 0.6;
    const double W = weighted_count(enumerate_solutions(in, 300, eta, t), eta);
    REQUIRE(W > 0);
    const double B = 50 / eta;
    const auto I = I_numeric(in, 300, eta, {-B, B}, 0.0, t);
    CHECK(std::fabs(I.value.real() - W) <= 0.02 * W + duality_tail_bound(in, 300, t, B));
    CHECK(I.value.real() == doctest::Approx(W).epsilon(0.05));
}

TEST_CASE("major arc integral is positive on the tiny instance") {
    const auto t = sieve(1000);
    const double P = std::pow(100.0, 5.0 / 12 - 0.01);
    const auto I = I_numeric(kTiny, 100, 0.5, {-P / 100, P / 100}, 0.0, t);
    CHECK(I.value.real() > 0);
}

TEST_CASE("main term scan along the cube sequence") {
    const auto t = sieve(30000);
    const ProblemInstance in{1, std::sqrt(2.0), -1, 2, 0, 0.1, 0.01};
    const auto scan = main_term_scan(in, {1728, 24389}, t);
    REQUIRE(scan.rows.size() == 2);
    for (const auto& r : scan.rows) CHECK(r.ratio > 0);
    CHECK(scan.bounded_below);
    CHECK_FALSE(scan.degenerate);
    const ProblemInstance pos{1, std::sqrt(2.0), 1, 2, -1, 0.1, 0.01};
    CHECK(pos.sign_infeasible());
    CHECK(main_term_scan(pos, {1728}, t).degenerate);
    CHECK(enumerate_solutions(pos, 1728, 0.9, t).empty());
}

TEST_CASE("doubling eta quadruples the kernel mass at zero residual") {
    const KernelParams a{0.2}, b{0.4};
    CHECK(kernel_K(0, b) == doctest::Approx(4 * kernel_K(0, a)));
}

TEST_CASE("instance validation") {
    ProblemInstance in;
    in.lambda2 = 0;
    CHECK_THROWS_AS(in.validate(), DomainError);
    in = ProblemInstance{};
    in.k = 3.5;
    CHECK_THROWS_AS(in.validate(), DomainError);
    in = ProblemInstance{};
    CHECK(ProblemInstance{1, 2, 3, 2, 0, 0.1, 0.01}.same_sign());
    CHECK_FALSE(in.same_sign());
}

TEST_CASE("solution CSV and run summary") {
    const auto t = sieve(1000);
    std::ostringstream os;
    write_solutions_csv(os, enumerate_solutions(kTiny, 100, 0.5, t));
    const auto s = os.str();
    CHECK(s.substr(0, s.find('\n')) == "p1,p2,p3,residual,weight");
    CHECK(std::count(s.begin(), s.end(), '\n') == 8);
    RunSummary r;
    r.I_imag = NAN;
    const auto j = nlohmann::json::parse(r.to_json());
    for (const char* key : {"X", "eta", "count", "weighted_count", "I_real", "I_imag", "tail_bound"}) CHECK(j.contains(key));
    CHECK(j["I_imag"].is_null());
}
