#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lvar/error.hpp"
#include "lvar/numeric/modular.hpp"

namespace lvar {

using i128 = __int128;

// tau(n) for 0 <= n <= n_max (tau(0) = 0), from
//   Delta = q prod (1-q^n)^24 = q (prod (1-q^n)^3)^8
// with Jacobi's prod (1-q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}.
// The eighth power is three NTT squarings modulo two ~2^62 primes, recombined by CRT
// into the symmetric range |x| < p1 p2 / 2 ~ 2^122. That covers every tau(n) with
// n <= 10^9 (|tau(n)| <= d(n) n^{11/2}), far past anything built here.
inline std::vector<i128> tau_expansion(std::size_t n_max) {
    using namespace modular;
    if (n_max < 1) throw DomainError("tau_expansion: n_max must be >= 1");
    if (n_max > 4000000) throw DomainError("tau_expansion: n_max beyond the supported transform size");
    const std::size_t len = n_max;  // coefficients of q^0..q^{n_max-1} in the eta product
    static const std::vector<NttPrime> primes = find_ntt_primes(24, 2);

    std::vector<std::vector<u64>> res;
    for (const NttPrime& P : primes) {
        std::vector<u64> e(len, 0);
        for (std::uint64_t k = 0;; ++k) {
            std::uint64_t idx = k * (k + 1) / 2;
            if (idx >= len) break;
            std::uint64_t c = (2 * k + 1) % P.p;
            e[idx] = (k % 2 == 0) ? c : (P.p - c) % P.p;
        }
        for (int round = 0; round < 3; ++round) e = square_truncated(e, len, P);
        e.resize(len, 0);
        res.push_back(std::move(e));
    }

    const u64 p1 = primes[0].p, p2 = primes[1].p;
    const u64 p1_inv_mod_p2 = powmod(p1 % p2, p2 - 2, p2);
    const i128 M = (i128)p1 * (i128)p2;
    std::vector<i128> tau(n_max + 1, 0);
    for (std::size_t i = 0; i < len; ++i) {
        // Garner: x = r1 + p1 * ((r2 - r1) / p1 mod p2)
        u64 r1 = res[0][i], r2 = res[1][i];
        u64 diff = (r2 + p2 - r1 % p2) % p2;
        u64 t = mulmod(diff, p1_inv_mod_p2, p2);
        i128 x = (i128)r1 + (i128)p1 * (i128)t;
        if (x > M / 2) x -= M;
        tau[i + 1] = x;
    }
    return tau;
}

}  // namespace lvar
