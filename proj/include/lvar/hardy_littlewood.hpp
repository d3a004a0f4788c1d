#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>

#include "lvar/coefficients/tables.hpp"
#include "lvar/error.hpp"
#include "lvar/numeric/kahan.hpp"
#include "lvar/primes.hpp"

namespace lvar {

struct SingularSeriesValue {
    std::uint64_t k;
    double value;
    std::uint64_t prime_cutoff;
    double tail_bound;  // |S(k) - value| <= tail_bound
};

namespace detail {

// log prod_{2 < p <= P} (1 - 1/(p-1)^2), memoized per P.
inline double twin_log_product(std::uint64_t P) {
    static std::mutex mu;
    static std::map<std::uint64_t, double> memo;
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = memo.find(P); it != memo.end()) return it->second;
    }
    KahanSum<> acc;
    for_each_prime(P, [&](std::uint64_t p) {
        if (p == 2) return;
        double x = 1.0 / (double(p - 1) * double(p - 1));
        acc += std::log1p(-x);
    });
    std::lock_guard<std::mutex> lock(mu);
    memo[P] = acc.value();
    return acc.value();
}

}  // namespace detail

// Singular series S(k): 0 for odd k, otherwise
//   2 prod_{p > 2} (1 - 1/(p-1)^2) prod_{p > 2, p | k} (p-1)/(p-2)
// with the infinite product truncated at P. The factor over p | k is exact for every
// odd prime divisor of k, however large. Everything is accumulated in log space.
inline SingularSeriesValue singular_series(std::uint64_t k, std::uint64_t P) {
    if (k < 1) throw DomainError("singular_series: k must be >= 1");
    if (P < 3) throw DomainError("singular_series: P must be >= 3");
    if (k % 2 == 1) return {k, 0.0, P, 0.0};
    double lg = std::log(2.0) + detail::twin_log_product(P);
    std::uint64_t m = k;
    while (m % 2 == 0) m /= 2;
    for (std::uint64_t p = 3; p * p <= m; p += 2) {
        if (m % p) continue;
        lg += std::log(double(p - 1)) - std::log(double(p - 2));
        while (m % p == 0) m /= p;
    }
    if (m > 1) lg += std::log(double(m - 1)) - std::log(double(m - 2));
    double v = std::exp(lg);
    // sum_{p > P} -log(1 - 1/(p-1)^2) <= sum_{n > P} 1/((n-1)^2 - 1) <= 1/(P-2)
    double b = 1.0 / double(P - 2);
    return {k, v, P, v * std::expm1(b)};
}

// sum_{n <= X} Lambda_F(n) Lambda_F(n + k)
inline double autocorrelation(const CoefficientTable& t, std::uint64_t X, std::uint64_t k) {
    if (X + k > t.N) throw RangeError("autocorrelation: need X + k <= N");
    KahanSum<> acc;
    const auto& L = t.lambda_values;
    for (std::uint64_t n = 1; n <= X; ++n) {
        double a = L[n];
        if (a != 0.0) acc += a * L[n + k];
    }
    return acc.value();
}

}  // namespace lvar
