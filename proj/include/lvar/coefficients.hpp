#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "lvar/coefficient_cache.hpp"
#include "lvar/coefficients/elliptic_curve.hpp"
#include "lvar/coefficients/ramanujan_tau.hpp"
#include "lvar/coefficients/tables.hpp"
#include "lvar/error.hpp"
#include "lvar/lfunc_registry.hpp"
#include "lvar/numeric/kahan.hpp"
#include "lvar/primes.hpp"

namespace lvar {

namespace detail {
inline void fill_prefix(CoefficientTable& t) {
    t.psi_prefix.assign(t.N + 1, 0.0);
    KahanSum<> acc;
    for (std::uint64_t n = 1; n <= t.N; ++n) {
        acc += t.lambda_values[n];
        t.psi_prefix[n] = acc.value();
    }
}
}  // namespace detail

inline CoefficientTable von_mangoldt_sieve(std::uint64_t N) {
    if (N == 0) throw DomainError("von_mangoldt_sieve: N must be >= 1");
    CoefficientTable t{"zeta", N, 1, std::vector<double>(N + 1, 0.0), {}};
    for_each_prime(N, [&](std::uint64_t p) {
        double lp = std::log(double(p));
        for (std::uint64_t q = p;; q *= p) {
            t.lambda_values[q] = lp;
            if (q > N / p) break;
        }
    });
    detail::fill_prefix(t);
    return t;
}

// alpha^k + beta^k for a good degree-2 prime (alpha + beta = a, alpha beta = 1);
// a^k for degree-1 or bad primes.
inline double satake_power(double a, int k, bool bad, int degree = 2) {
    if (k < 0) throw DomainError("satake_power: k must be >= 0");
    if (degree == 1 || bad) return std::pow(a, k);
    double s_prev = 2.0, s = a;
    if (k == 0) return s_prev;
    for (int i = 2; i <= k; ++i) {
        double next = a * s - s_prev;
        s_prev = s;
        s = next;
    }
    return s;
}

// Power-series data of one local Euler factor F_p(x) = 1 / (1 - a x + x^2) (good,
// degree 2) or 1 / (1 - a x) (degree 1 or bad), with x = p^{-s}.
struct LocalFactor {
    double a = 0.0;
    bool bad = false;
    int degree = 1;

    bool quadratic() const { return degree == 2 && !bad; }
    // alpha^l + beta^l (or a^l)
    double s(int l) const { return satake_power(a, l, bad, degree); }
    // b_F(p^l) = s(l) / l
    double b(int l) const { return s(l) / double(l); }
    // coefficients of F_p(x) up to x^mmax: a_F(p^m)
    std::vector<double> dirichlet(int mmax) const {
        std::vector<double> c(std::size_t(mmax) + 1, 0.0);
        c[0] = 1.0;
        for (int m = 1; m <= mmax; ++m) {
            c[m] = a * c[m - 1];
            if (quadratic() && m >= 2) c[m] -= c[m - 2];
        }
        return c;
    }
    // coefficients of 1/F_p(x): mu_F(p^k)
    std::vector<double> inverse(int kmax) const {
        std::vector<double> c(std::size_t(kmax) + 1, 0.0);
        c[0] = 1.0;
        if (kmax >= 1) c[1] = -a;
        if (kmax >= 2 && quadratic()) c[2] = 1.0;
        return c;
    }
};

inline LocalFactor local_factor(const PrimeCoefficientTable& t, const PrimeCoefficient& e) {
    return LocalFactor{e.a, e.bad, t.degree};
}

struct CoefficientOptions {
    // largest P computed from scratch; beyond it a cache hit is required
    std::uint64_t compute_budget = 4'000'000;
    std::optional<std::string> cache_dir;
};

// Parses "p a [bad]" lines ('#' comments and blank lines ignored), primes ascending.
inline PrimeCoefficientTable read_external_table(const std::string& name, const ExternalTable& ext) {
    std::ifstream in(ext.path);
    if (!in) throw ParseError("external table " + ext.path + ": cannot open");
    PrimeCoefficientTable t{name, 0, ext.degree, {}};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::uint64_t p;
        double a;
        if (!(ss >> p)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ParseError(ext.path + ":" + std::to_string(lineno) + ": expected a prime");
        }
        if (!(ss >> a)) throw ParseError(ext.path + ":" + std::to_string(lineno) + ": expected a coefficient");
        std::string flag;
        bool bad = false;
        if (ss >> flag) {
            if (flag == "bad" || flag == "1")
                bad = true;
            else if (flag != "good" && flag != "0")
                throw ParseError(ext.path + ":" + std::to_string(lineno) + ": unknown flag '" + flag + "'");
        }
        if (!modular::is_prime(p)) throw ParseError(ext.path + ":" + std::to_string(lineno) + ": " + std::to_string(p) + " is not prime");
        if (!t.entries.empty() && p <= t.entries.back().p)
            throw ParseError(ext.path + ":" + std::to_string(lineno) + ": primes must ascend");
        t.entries.push_back({p, a, bad});
    }
    // the table is complete up to the first gap in the prime sequence
    std::size_t i = 0;
    std::uint64_t covered = 1;
    bool gap = false;
    for_each_prime(t.entries.empty() ? 1 : t.entries.back().p, [&](std::uint64_t p) {
        if (gap) return;
        if (i < t.entries.size() && t.entries[i].p == p) {
            covered = p;
            ++i;
        } else {
            gap = true;
        }
    });
    t.cutoff = covered;
    t.entries.resize(i);
    return t;
}

namespace detail {

inline std::string cache_key(const LFunctionDescriptor& d) {
    return std::visit(
        [&](auto&& src) -> std::string {
            using S = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<S, RamanujanDelta>) {
                return "delta";
            } else if constexpr (std::is_same_v<S, EllipticCurve>) {
                return "ec_" + std::to_string(src.a1) + "_" + std::to_string(src.a2) + "_" + std::to_string(src.a3) +
                       "_" + std::to_string(src.a4) + "_" + std::to_string(src.a6) + "_N" +
                       std::to_string(src.conductor);
            } else {
                return "";
            }
        },
        d.source());
}

inline double to_double(i128 x) { return double((long double)x); }

}  // namespace detail

// Normalized prime coefficients a_F(p), p <= P.
inline PrimeCoefficientTable prime_coefficients(const LFunctionDescriptor& d, std::uint64_t P,
                                                const CoefficientOptions& opt = {}) {
    if (P < 2) throw DomainError("prime_coefficients: P must be >= 2");
    const int deg = local_degree(d);

    if (auto* ext = std::get_if<ExternalTable>(&d.source())) {
        PrimeCoefficientTable t = read_external_table(d.name(), *ext);
        if (t.cutoff < P)
            throw RangeError("external table " + ext->path + " covers primes up to " + std::to_string(t.cutoff) +
                             ", need " + std::to_string(P));
        return t.truncated(P);
    }

    PrimeCoefficientTable t{d.name(), P, deg, {}};
    if (std::holds_alternative<RiemannZeta>(d.source())) {
        for_each_prime(P, [&](std::uint64_t p) { t.entries.push_back({p, 1.0, false}); });
        return t;
    }

    std::string key = detail::cache_key(d);
    std::optional<std::string> path;
    if (opt.cache_dir) {
        path = *opt.cache_dir + "/" + key + ".coef";
        if (auto cached = try_read_cache(*path); cached && cached->cutoff >= P) {
            PrimeCoefficientTable c = cached->truncated(P);
            c.desc_name = d.name();
            c.degree = deg;
            return c;
        }
    }
    if (P > opt.compute_budget)
        throw DomainError("prime_coefficients: P=" + std::to_string(P) + " exceeds the compute budget " +
                          std::to_string(opt.compute_budget) + " and no cache covers it");

    std::vector<std::uint64_t> primes;
    for_each_prime(P, [&](std::uint64_t p) { primes.push_back(p); });
    t.entries.reserve(primes.size());

    if (std::holds_alternative<RamanujanDelta>(d.source())) {
        std::vector<i128> tau = tau_expansion(P);
        for (std::uint64_t p : primes) {
            double norm = std::pow(double(p), 5.0) * std::sqrt(double(p));
            t.entries.push_back({p, detail::to_double(tau[p]) / norm, false});
        }
    } else if (auto* ec = std::get_if<EllipticCurve>(&d.source())) {
        std::vector<std::int64_t> ap = ec_traces(*ec, primes);
        for (std::size_t i = 0; i < primes.size(); ++i) {
            std::uint64_t p = primes[i];
            bool bad = ec->conductor % p == 0;
            t.entries.push_back({p, double(ap[i]) / std::sqrt(double(p)), bad});
        }
    }
    if (path) write_cache(*path, t);
    return t;
}

// Lambda_F(p^k) = satake_power(a_F(p), k) log p, zero off prime powers.
inline CoefficientTable lambda_table(const LFunctionDescriptor& d, const PrimeCoefficientTable& primes,
                                     std::uint64_t N) {
    if (N == 0) throw DomainError("lambda_table: N must be >= 1");
    if (primes.cutoff < N)
        throw RangeError("lambda_table: prime table for " + primes.desc_name + " stops at " +
                         std::to_string(primes.cutoff) + " < N=" + std::to_string(N));
    CoefficientTable t{d.name(), N, d.pole_order(), std::vector<double>(N + 1, 0.0), {}};
    for (const auto& e : primes.entries) {
        if (e.p > N) break;
        double lp = std::log(double(e.p));
        LocalFactor lf = local_factor(primes, e);
        int k = 1;
        for (std::uint64_t q = e.p;; q *= e.p, ++k) {
            t.lambda_values[q] = lf.s(k) * lp;
            if (q > N / e.p) break;
        }
    }
    detail::fill_prefix(t);
    return t;
}

inline CoefficientTable lambda_table(const LFunctionDescriptor& d, std::uint64_t N, const CoefficientOptions& opt = {}) {
    return lambda_table(d, prime_coefficients(d, std::max<std::uint64_t>(N, 2), opt), N);
}

// mu_F(p^k), k = 0..kmax
inline std::vector<double> local_inverse_coefficients(const PrimeCoefficientTable& primes, std::uint64_t p, int kmax) {
    if (kmax < 0) throw DomainError("local_inverse_coefficients: kmax must be >= 0");
    return local_factor(primes, primes.at(p)).inverse(kmax);
}

// S(x) = sum_{p <= x} |a_F(p)|^2 / p
inline double orthogonality_sum(const PrimeCoefficientTable& primes, double x) {
    if (x < 2.0) throw DomainError("orthogonality_sum: x must be >= 2");
    if (double(primes.cutoff) < std::floor(x)) throw RangeError("orthogonality_sum: table too short");
    KahanSum<> acc;
    for (const auto& e : primes.entries) {
        if (double(e.p) > x) break;
        acc += e.a * e.a / double(e.p);
    }
    return acc.value();
}

}  // namespace lvar
