#include "dhlab/primes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dhlab/errors.hpp"
#include "dhlab/extended.hpp"

namespace dhlab {

namespace {

constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 18;

std::vector<std::uint64_t> small_primes(std::uint64_t n) {
    std::vector<char> composite(n + 1, 0);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = 1;
    }
    return out;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
    : limit_(limit), primes_(std::move(primes)) {
    theta_prefix_.reserve(primes_.size() + 1);
    CompensatedSum acc;
    for (auto p : primes_) {
        acc.add(std::log(static_cast<double>(p)));
        theta_prefix_.push_back(acc.value());
    }
}

std::size_t PrimeTable::count_up_to(double x) const {
    if (x < 2.0) return 0;
    if (x > static_cast<double>(limit_))
        throw InsufficientTable("prime table limit " + std::to_string(limit_) + " below " +
                                    std::to_string(x),
                                x);
    auto bound = static_cast<std::uint64_t>(std::floor(x));
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), bound) -
                                    primes_.begin());
}

double SumRange::lower_root() const { return std::pow(delta * X, 1.0 / k); }
double SumRange::upper_root() const { return std::pow(X, 1.0 / k); }

PrimeTable sieve(std::uint64_t limit) {
    if (limit < 2) throw DomainError("sieve: limit must be at least 2");

    const std::uint64_t root = isqrt(limit);
    const std::vector<std::uint64_t> base = small_primes(root);

    std::vector<std::uint64_t> primes;
    primes.reserve(static_cast<std::size_t>(1.2 * limit / std::max(1.0, std::log(double(limit)))) + 16);

    std::vector<char> segment(kSegmentSize);
    for (std::uint64_t low = 2; low <= limit; low += kSegmentSize) {
        const std::uint64_t high = std::min(low + kSegmentSize - 1, limit);
        std::fill(segment.begin(), segment.end(), 0);
        for (auto p : base) {
            if (p * p > high) break;
            std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
            for (std::uint64_t j = start; j <= high; j += p) segment[j - low] = 1;
        }
        for (std::uint64_t n = low; n <= high; ++n)
            if (!segment[n - low]) primes.push_back(n);
    }
    return PrimeTable(limit, std::move(primes));
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

double theta(double x, const PrimeTable& table) {
    return table.theta_prefix(table.count_up_to(x));
}

bool in_window(std::uint64_t n, const SumRange& range) {
    const quad lo = static_cast<quad>(range.delta) * static_cast<quad>(range.X);
    const quad hi = static_cast<quad>(range.X);
    const quad v = quad_pow(n, range.k);
    return lo <= v && v <= hi;
}

std::vector<PrimeTerm> primes_in_range(const SumRange& range, const PrimeTable& table) {
    if (!(range.k > 0) || !(range.X > 0)) return {};
    const double top = range.upper_root();
    if (std::floor(top * (1 - 1e-15)) > static_cast<double>(table.limit()))
        throw InsufficientTable("primes_in_range: table limit below X^{1/k}", top);

    const double lo_root = std::max(0.0, range.lower_root());
    auto first = static_cast<std::uint64_t>(std::max(0.0, std::floor(lo_root) - 1));
    auto last = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::ceil(top)) + 1, table.limit());

    auto ps = table.primes();
    auto it = std::lower_bound(ps.begin(), ps.end(), first);
    std::vector<PrimeTerm> out;
    for (; it != ps.end() && *it <= last; ++it) {
        if (in_window(*it, range)) out.push_back({*it, std::log(static_cast<double>(*it))});
    }
    return out;
}

std::vector<std::uint64_t> integers_in_range(const SumRange& range) {
    std::vector<std::uint64_t> out;
    if (!(range.k > 0) || !(range.X >= 1)) return out;
    const double lo_root = std::max(0.0, range.lower_root());
    auto first = static_cast<std::uint64_t>(std::max(1.0, std::floor(lo_root) - 1));
    auto last = static_cast<std::uint64_t>(std::ceil(range.upper_root())) + 1;
    for (std::uint64_t n = first; n <= last; ++n)
        if (in_window(n, range)) out.push_back(n);
    return out;
}

}  // namespace dhlab
