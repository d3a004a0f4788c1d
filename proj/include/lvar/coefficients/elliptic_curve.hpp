#pragma once

#include <cstdint>
#include <vector>

#include "lvar/lfunc_registry.hpp"
#include "lvar/numeric/parallel.hpp"

namespace lvar {

namespace detail {

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// Projective point count over F_2 by enumeration (8 affine candidates).
inline std::int64_t ec_count_p2(const EllipticCurve& e) {
    std::int64_t a1 = mod_floor(e.a1, 2), a2 = mod_floor(e.a2, 2), a3 = mod_floor(e.a3, 2),
                 a4 = mod_floor(e.a4, 2), a6 = mod_floor(e.a6, 2);
    std::int64_t count = 1;
    for (std::int64_t x = 0; x < 2; ++x)
        for (std::int64_t y = 0; y < 2; ++y)
            if (mod_floor(y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6), 2) == 0) ++count;
    return count;
}

}  // namespace detail

// a_p = p + 1 - #E(F_p), counting the point at infinity and, at primes of bad
// reduction, the singular point. For a minimal model this gives a_p in {0, +-1} at p | N.
//
// Odd p: completing the square turns the curve into Y^2 = f(x) with
// f = 4x^3 + b2 x^2 + 2 b4 x + b6, so the affine count is sum_x (1 + chi(f(x))) and
// a_p = -sum_x chi(f(x)). chi comes from a bitset of squares mod p and f(x) is
// stepped through with third-order finite differences.
inline std::int64_t ec_trace_of_frobenius(const EllipticCurve& e, std::uint64_t p_u) {
    using detail::mod_floor;
    const std::int64_t p = std::int64_t(p_u);
    if (p == 2) return 3 - detail::ec_count_p2(e);

    std::vector<std::uint64_t> square((std::size_t(p) + 63) / 64, 0);
    {
        std::int64_t y2 = 0;  // y^2 mod p, stepping (y+1)^2 = y^2 + 2y + 1
        for (std::int64_t y = 0; y <= (p - 1) / 2; ++y) {
            square[std::size_t(y2) >> 6] |= std::uint64_t(1) << (y2 & 63);
            y2 += 2 * y + 1;
            if (y2 >= p) y2 -= p;
            if (y2 >= p) y2 -= p;
        }
    }
    const std::int64_t a1 = mod_floor(e.a1, p), a2 = mod_floor(e.a2, p), a3 = mod_floor(e.a3, p),
                       a4 = mod_floor(e.a4, p), a6 = mod_floor(e.a6, p);
    const std::int64_t b2 = mod_floor(a1 * a1 + 4 * a2, p);
    const std::int64_t b4 = mod_floor(2 * a4 + a1 * a3, p);
    const std::int64_t b6 = mod_floor(a3 * a3 + 4 * a6, p);
    // f(x) = 4x^3 + b2 x^2 + 2 b4 x + b6; forward differences at x = 0
    auto f = [&](std::int64_t x) {
        x = mod_floor(x, p);
        std::int64_t v = mod_floor(4 * x + b2, p);
        v = mod_floor(v * x + 2 * b4, p);
        return mod_floor(v * x + b6, p);
    };
    std::int64_t f0 = f(0), f1 = f(1), f2 = f(2), f3 = f(3);
    std::int64_t d1 = mod_floor(f1 - f0, p);
    std::int64_t d2 = mod_floor(f2 - 2 * f1 + f0, p);
    const std::int64_t d3 = mod_floor(f3 - 3 * f2 + 3 * f1 - f0, p);
    std::int64_t v = f0;
    std::int64_t chi_sum = 0;
    for (std::int64_t x = 0; x < p; ++x) {
        if (v != 0) chi_sum += ((square[std::size_t(v) >> 6] >> (v & 63)) & 1) ? 1 : -1;
        v += d1;
        if (v >= p) v -= p;
        d1 += d2;
        if (d1 >= p) d1 -= p;
        d2 += d3;
        if (d2 >= p) d2 -= p;
    }
    return -chi_sum;
}

// a_p for every prime in `primes`, computed in parallel (each slot written by one thread).
inline std::vector<std::int64_t> ec_traces(const EllipticCurve& e, const std::vector<std::uint64_t>& primes) {
    std::vector<std::int64_t> out(primes.size());
    parallel_for(primes.size(), [&](std::size_t i) { out[i] = ec_trace_of_frobenius(e, primes[i]); });
    return out;
}

}  // namespace lvar
