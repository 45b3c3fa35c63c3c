#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace polybohr {

using cplx = std::complex<double>;

inline constexpr double euler_gamma = 0.5772156649015329;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Caller broke a documented precondition (shape mismatch, out-of-range index).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but outside the set the operation is defined on.
class RejectedInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Formula evaluated outside the range where it is stated.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A bound exists in principle but this method cannot provide it.
class NotRepresentable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Series truncation too short for a geometric tail bound.
class NeedsLargerTruncation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense allocation would exceed the configured entry budget.
class BudgetExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

#define POLYBOHR_REQUIRE(cond, Exc, msg) \
    do {                                 \
        if (!(cond)) throw Exc(msg);     \
    } while (0)

// ---------------------------------------------------------------------------
// Summation
// ---------------------------------------------------------------------------

/// Pairwise (cascade) summation; error grows like O(log n * eps).
inline double pairwise_sum(std::span<const double> x)
{
    constexpr std::size_t base = 32;
    if (x.size() <= base) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

/// Neumaier-compensated running sum for streamed terms.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Log-space combinatorics
// ---------------------------------------------------------------------------

inline double log_factorial(long long k) { return std::lgamma(static_cast<double>(k) + 1.0); }

inline double log_binomial(long long n, long long k)
{
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Exact binomial for small arguments (throws on overflow of 64 bits).
inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k)
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        const std::uint64_t g = std::gcd(r, i);
        const std::uint64_t r1 = r / g, i1 = i / g;
        const std::uint64_t num1 = num / i1;
        if (num1 != 0 && r1 > std::numeric_limits<std::uint64_t>::max() / num1)
            throw BudgetExceeded("binomial coefficient overflows 64 bits");
        r = r1 * num1;
    }
    return r;
}

/// x log(x); 0 at x = 0.
inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

// ---------------------------------------------------------------------------
// Random numbers
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for task `index` under `root`; independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index)
{
    return splitmix64(splitmix64(root) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// xoshiro256** with portable uniform/normal draws (no std distributions, so
/// draws are identical across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed)
    {
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s = splitmix64(s);
            w = s;
        }
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = rad * std::sin(ang);
        has_spare_ = true;
        return rad * std::cos(ang);
    }

    double sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    /// Uniform point on the unit circle.
    cplx unimodular() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

    /// Standard complex Gaussian (E|z|^2 = 1).
    cplx complex_normal()
    {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// ---------------------------------------------------------------------------
// Parallel map
// ---------------------------------------------------------------------------

/// Worker count: POLYBOHR_THREADS if set, else hardware concurrency.
inline unsigned worker_count()
{
    if (const char* env = std::getenv("POLYBOHR_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {
inline bool& inside_parallel_region()
{
    thread_local bool inside = false;
    return inside;
}
} // namespace detail

/// Runs fn(i) for i in [0, count). Each index writes its own slot, so results
/// do not depend on the schedule. Nested calls run serially on the caller.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    const std::size_t workers =
        detail::inside_parallel_region() ? 1 : std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                detail::inside_parallel_region() = true;
                try {
                    for (std::size_t i = w; i < count; i += workers) fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn)
{
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

} // namespace polybohr
