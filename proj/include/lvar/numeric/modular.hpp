#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lvar::modular {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<u64> distinct_prime_factors(u64 n) {
    std::vector<u64> f;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            f.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) f.push_back(n);
    return f;
}

// An NTT-friendly prime p = c * 2^k + 1 together with a primitive root.
struct NttPrime {
    u64 p;
    u64 root;
    int two_adicity;
};

// Largest primes of the form c*2^k + 1 below `below`, in decreasing order.
inline std::vector<NttPrime> find_ntt_primes(int k, std::size_t count, u64 below = (1ull << 62)) {
    std::vector<NttPrime> out;
    u64 step = 1ull << k;
    u64 c = (below - 1) >> k;
    for (; c > 0 && out.size() < count; --c) {
        u64 p = c * step + 1;
        if (p >= below || !is_prime(p)) continue;
        std::vector<u64> fac = distinct_prime_factors(c);
        fac.push_back(2);
        for (u64 g = 2; g < p; ++g) {
            bool ok = true;
            for (u64 q : fac) {
                if (powmod(g, (p - 1) / q, p) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                int adic = 0;
                for (u64 t = p - 1; (t & 1) == 0; t >>= 1) ++adic;
                out.push_back({p, g, adic});
                break;
            }
        }
    }
    if (out.size() < count) throw std::runtime_error("find_ntt_primes: not enough primes");
    return out;
}

// Montgomery arithmetic modulo an odd p < 2^63 with R = 2^64.
struct Montgomery {
    u64 p, pinv_neg, r2;
    explicit Montgomery(u64 mod) : p(mod) {
        u64 inv = p;  // Newton iteration for p^{-1} mod 2^64
        for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
        pinv_neg = 0 - inv;
        u128 r = (u128)0 - p;  // 2^128 - p
        r2 = u64(r % p);
    }
    u64 reduce(u128 t) const {
        u64 m = u64(t) * pinv_neg;
        u64 r = u64((t + (u128)m * p) >> 64);
        return r >= p ? r - p : r;
    }
    u64 mul(u64 a, u64 b) const { return reduce((u128)a * b); }
    u64 to(u64 a) const { return mul(a % p, r2); }
    u64 from(u64 a) const { return reduce(a); }
};

// In-place iterative radix-2 transform of Montgomery-form values; a.size() must be a power of two.
inline void ntt(std::vector<u64>& a, const NttPrime& P, const Montgomery& M, bool inverse) {
    const u64 mod = P.p;
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<u64> tw(n / 2 > 0 ? n / 2 : 1);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 w = powmod(P.root, (mod - 1) / len, mod);
        if (inverse) w = powmod(w, mod - 2, mod);
        u64 wm = M.to(w);
        std::size_t half = len >> 1;
        tw[0] = M.to(1);
        for (std::size_t i = 1; i < half; ++i) tw[i] = M.mul(tw[i - 1], wm);
        for (std::size_t i = 0; i < n; i += len) {
            u64* x = &a[i];
            u64* y = &a[i + half];
            for (std::size_t j = 0; j < half; ++j) {
                u64 u = x[j];
                u64 v = M.mul(y[j], tw[j]);
                u64 s = u + v;
                x[j] = s >= mod ? s - mod : s;
                y[j] = u >= v ? u - v : u + mod - v;
            }
        }
    }
    if (inverse) {
        u64 inv_n = M.to(powmod(n % mod, mod - 2, mod));
        for (auto& x : a) x = M.mul(x, inv_n);
    }
}

// Square a polynomial (coefficients reduced mod P.p) and truncate to `keep` coefficients.
inline std::vector<u64> square_truncated(const std::vector<u64>& a, std::size_t keep, const NttPrime& P) {
    std::size_t need = 2 * a.size() - 1;
    std::size_t n = 1;
    while (n < need) n <<= 1;
    if (n > (std::size_t(1) << P.two_adicity)) throw std::runtime_error("square_truncated: transform too long");
    Montgomery M(P.p);
    std::vector<u64> f(n, 0);
    for (std::size_t i = 0; i < a.size(); ++i) f[i] = M.to(a[i]);
    ntt(f, P, M, false);
    for (auto& x : f) x = M.mul(x, x);
    ntt(f, P, M, true);
    f.resize(std::min(keep, need));
    for (auto& x : f) x = M.from(x);
    return f;
}

}  // namespace lvar::modular
