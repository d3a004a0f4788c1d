#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lvar/error.hpp"

namespace lvar {

// All primes <= n, plain sieve of Eratosthenes.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

// Calls visit(p) for every prime p <= n in increasing order. Memory is
// O(sqrt n + segment), independent of n.
template <class Visit>
void for_each_prime(std::uint64_t n, Visit visit, std::uint64_t segment = 1u << 18) {
    if (n < 2) return;
    std::uint64_t root = std::uint64_t(std::sqrt(double(n)));
    while (root * root > n) --root;
    while ((root + 1) * (root + 1) <= n) ++root;
    std::vector<std::uint64_t> base = primes_up_to(root);
    std::vector<char> mark(segment);
    for (std::uint64_t lo = 2; lo <= n; lo += segment) {
        std::uint64_t hi = std::min(n, lo + segment - 1);
        std::fill(mark.begin(), mark.begin() + (hi - lo + 1), 0);
        for (std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::uint64_t j = start; j <= hi; j += p) mark[j - lo] = 1;
        }
        for (std::uint64_t i = lo; i <= hi; ++i)
            if (!mark[i - lo]) visit(i);
    }
}

}  // namespace lvar
