#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dhlab {

/// Ascending primes up to `limit`, with compensated prefix sums of log p so
/// that theta(x) is a binary search.
class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes);

    std::uint64_t limit() const noexcept { return limit_; }
    std::span<const std::uint64_t> primes() const noexcept { return primes_; }
    std::size_t size() const noexcept { return primes_.size(); }

    /// Number of primes <= x (x <= limit).
    std::size_t count_up_to(double x) const;
    /// theta over the first n primes.
    double theta_prefix(std::size_t n) const { return theta_prefix_[n]; }

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> primes_;
    std::vector<double> theta_prefix_{0.0};
};

/// Summation window delta*X <= p^k <= X.
struct SumRange {
    double k = 1.0;
    double delta = 0.1;
    double X = 0.0;

    /// (delta X)^{1/k}
    double lower_root() const;
    /// X^{1/k}
    double upper_root() const;
};

struct PrimeTerm {
    std::uint64_t p;
    double log_p;
};

/// Segmented sieve of Eratosthenes (segment 2^18), single-threaded.
PrimeTable sieve(std::uint64_t limit);

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime_u64(std::uint64_t n);

/// Chebyshev theta(x) = sum_{p <= x} log p.
double theta(double x, const PrimeTable& table);

/// Primes with delta X <= p^k <= X. Membership is decided exactly for integral
/// k and in 113-bit arithmetic otherwise.
std::vector<PrimeTerm> primes_in_range(const SumRange& range, const PrimeTable& table);

/// Integers n >= 1 with delta X <= n^k <= X, same boundary rule.
std::vector<std::uint64_t> integers_in_range(const SumRange& range);

/// Membership test shared by the sieve-side and integer-side windows.
bool in_window(std::uint64_t n, const SumRange& range);

}  // namespace dhlab
