#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lvar/coefficient_cache.hpp"
#include "lvar/coefficients.hpp"
#include "lvar/coefficients/elliptic_curve.hpp"
#include "lvar/coefficients/ramanujan_tau.hpp"
#include "lvar/testing/oracles.hpp"

using namespace lvar;

namespace {

CoefficientOptions cached() {
    CoefficientOptions o;
    o.cache_dir = LVAR_TEST_CACHE;
    return o;
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "lvar-unit";
    std::filesystem::create_directories(dir);
    return dir / name;
}

// #E(F_p) including the point at infinity, by brute force over all (x, y)
std::int64_t brute_count(const EllipticCurve& e, std::int64_t p) {
    std::int64_t n = 1;
    for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t y = 0; y < p; ++y) {
            __int128 lhs = (__int128)y * y + (__int128)e.a1 * x * y + (__int128)e.a3 * y;
            __int128 rhs = (__int128)x * x * x + (__int128)e.a2 * x * x + (__int128)e.a4 * x + e.a6;
            __int128 d = (lhs - rhs) % p;
            if (d == 0) ++n;
        }
    return n;
}

}  // namespace

TEST(VonMangoldt, SmallValues) {
    auto t = von_mangoldt_sieve(100);
    EXPECT_EQ(t.lambda(1), 0.0);
    EXPECT_EQ(t.lambda(12), 0.0);
    EXPECT_DOUBLE_EQ(t.lambda(9), std::log(3.0));
    EXPECT_NEAR(t.psi(10), 3 * std::log(2.0) + 2 * std::log(3.0) + std::log(5.0) + std::log(7.0), 1e-13);
    EXPECT_NEAR(t.psi(10), 7.8319, 2e-4);  // 7.83201...
    EXPECT_THROW(von_mangoldt_sieve(0), DomainError);
}

TEST(VonMangoldt, ZetaLambdaTableMatchesSieveExactly) {
    auto sieve = von_mangoldt_sieve(200000);
    auto table = lambda_table(make_builtin(Builtin::riemann_zeta), 200000);
    EXPECT_EQ(sieve.lambda_values, table.lambda_values);
}

TEST(VonMangoldt, OnlyPrimePowersAreNonzero) {
    auto primes = prime_coefficients(make_builtin(Builtin::ramanujan_delta), 20000, cached());
    auto t = lambda_table(make_builtin(Builtin::ramanujan_delta), primes, 20000);
    for (std::uint64_t n = 1; n <= 20000; ++n) {
        bool pp = oracle::prime_power(n).first != 0;
        if (!pp) {
            EXPECT_EQ(t.lambda(n), 0.0) << n;
        }
        EXPECT_NEAR(t.lambda(n), oracle::lambda(primes, n), 1e-12) << n;
    }
}

TEST(VonMangoldt, PrefixSumsAreConsistent) {
    auto t = lambda_table(make_builtin(Builtin::riemann_zeta), 100000);
    double s = 0.0;
    for (std::uint64_t n = 1; n <= t.N; ++n) {
        s += t.lambda(n);
        ASSERT_NEAR(t.psi_prefix[n], s, 1e-9 * std::max(1.0, s));
    }
}

TEST(Tau, SmallValuesAndHeckeRelation) {
    auto tau = tau_expansion(2600);
    EXPECT_EQ((long long)tau[1], 1);
    EXPECT_EQ((long long)tau[2], -24);
    EXPECT_EQ((long long)tau[3], 252);
    EXPECT_EQ((long long)tau[5], 4830);
    EXPECT_EQ((long long)tau[11], 534612);
    for (std::uint64_t p : primes_up_to(50)) {
        __int128 p11 = 1;
        for (int i = 0; i < 11; ++i) p11 *= p;
        EXPECT_TRUE(tau[p * p] == tau[p] * tau[p] - p11) << "p=" << p;
    }
}

TEST(Tau, DeltaCoefficientsNormalizedAndBounded) {
    auto t = prime_coefficients(make_builtin(Builtin::ramanujan_delta), 100000, cached());
    EXPECT_NEAR(t.at(2).a, -24.0 / std::pow(2.0, 5.5), 1e-15);
    for (auto& e : t.entries) EXPECT_LE(std::abs(e.a), 2.0) << e.p;
}

TEST(EllipticCurve, Curve37aSmallPrimes) {
    auto d = curve_37a();
    auto t = prime_coefficients(d, 100, {});
    EXPECT_NEAR(t.at(2).a, -std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(t.at(3).a * std::sqrt(3.0), -3.0, 1e-12);
    EXPECT_NEAR(t.at(5).a * std::sqrt(5.0), -2.0, 1e-12);
    EXPECT_NEAR(t.at(7).a * std::sqrt(7.0), -1.0, 1e-12);
    EXPECT_TRUE(t.at(37).bad);
    EXPECT_FALSE(t.at(41).bad);
}

TEST(EllipticCurve, TracesMatchBruteForceCount) {
    const EllipticCurve curves[] = {{0, 0, 1, -1, 0, 37}, {0, -1, 1, -10, -20, 11}, {1, 0, 0, -1, 0, 0}};
    for (const auto& e : curves)
        for (std::uint64_t p : primes_up_to(300)) {
            std::int64_t ap = std::int64_t(p) + 1 - brute_count(e, std::int64_t(p));
            EXPECT_EQ(ec_trace_of_frobenius(e, p), ap) << "p=" << p;
        }
}

TEST(EllipticCurve, ParallelTracesEqualSequential) {
    auto e = EllipticCurve{0, 0, 1, -1, 0, 37};
    auto primes = primes_up_to(20000);
    auto par = ec_traces(e, primes);
    for (std::size_t i = 0; i < primes.size(); i += 37) EXPECT_EQ(par[i], ec_trace_of_frobenius(e, primes[i]));
}

TEST(EllipticCurve, HasseBound) {
    auto t = prime_coefficients(curve_37a(), 100000, cached());
    for (auto& e : t.entries)
        if (!e.bad) {
            EXPECT_LE(std::abs(e.a), 2.0) << e.p;
        }
}

TEST(Satake, RecurrenceValues) {
    const double a = 0.7;
    EXPECT_DOUBLE_EQ(satake_power(a, 0, false), 2.0);
    EXPECT_DOUBLE_EQ(satake_power(a, 1, false), a);
    EXPECT_NEAR(satake_power(a, 2, false), a * a - 2.0, 1e-15);
    EXPECT_DOUBLE_EQ(satake_power(a, 3, true), a * a * a);
    EXPECT_DOUBLE_EQ(satake_power(a, 3, false, 1), a * a * a);
    for (int k = 0; k <= 12; ++k) EXPECT_NEAR(satake_power(1.3, k, false), oracle::satake_sum(1.3, k, true), 1e-10);
}

// sum_k Lambda(p^k) x^k = -x d/dx log(local factor) as series, for p <= 100
TEST(Satake, LocalSeriesIdentity) {
    for (auto d : {make_builtin(Builtin::riemann_zeta), make_builtin(Builtin::ramanujan_delta), curve_37a()}) {
        auto primes = prime_coefficients(d, 100, cached());
        for (auto& e : primes.entries) {
            LocalFactor lf = local_factor(primes, e);
            // F_p(x) = 1 / (1 - a x + x^2) or 1 / (1 - a x): -x (log F_p)' = x Q'(x) / Q(x) with Q = 1/F_p
            std::vector<double> Q = lf.inverse(2), xq(10, 0.0), series(10, 0.0);
            for (int k = 1; k <= 2; ++k) xq[k] = -k * Q[k];
            // series = x Q' / Q, solved term by term: Q * series = -x Q'
            for (int k = 1; k <= 8; ++k) {
                double s = xq[k];
                for (int j = 1; j <= 2 && j < k; ++j) s -= Q[j] * series[k - j];
                series[k] = s;
            }
            double lp = std::log(double(e.p));
            for (int k = 1; k <= 8; ++k) EXPECT_NEAR(lf.s(k) * lp, series[k] * lp, 1e-10) << d.name() << " p=" << e.p;
        }
    }
}

TEST(LocalInverse, Values) {
    auto z = prime_coefficients(make_builtin(Builtin::riemann_zeta), 100);
    EXPECT_EQ(local_inverse_coefficients(z, 7, 3), (std::vector<double>{1, -1, 0, 0}));
    auto e = prime_coefficients(curve_37a(), 100, cached());
    double a = e.at(5).a;
    EXPECT_EQ(local_inverse_coefficients(e, 5, 3), (std::vector<double>{1, -a, 1, 0}));
    double b = e.at(37).a;
    // bad prime: local factor 1/(1 - b x) inverts to 1 - b x
    EXPECT_EQ(local_inverse_coefficients(e, 37, 3), (std::vector<double>{1, -b, 0, 0}));
}

TEST(Orthogonality, Sums) {
    auto z = prime_coefficients(make_builtin(Builtin::riemann_zeta), 100);
    double direct = 0.0;
    for (auto p : primes_up_to(100)) direct += 1.0 / double(p);
    EXPECT_NEAR(orthogonality_sum(z, 100), direct, 1e-14);
    EXPECT_NEAR(orthogonality_sum(z, 100), 1.8029, 1e-4);
    auto d = prime_coefficients(make_builtin(Builtin::ramanujan_delta), 100000, cached());
    EXPECT_DOUBLE_EQ(orthogonality_sum(d, 2), d.at(2).a * d.at(2).a / 2.0);
    EXPECT_NEAR(orthogonality_sum(d, 1e5), std::log(std::log(1e5)), 1.5);
    EXPECT_THROW(orthogonality_sum(d, 1.5), DomainError);
}

TEST(Lambda, DeltaAtFour) {
    auto d = make_builtin(Builtin::ramanujan_delta);
    auto t = lambda_table(d, 100, cached());
    auto primes = prime_coefficients(d, 100, cached());
    double a = primes.at(2).a;
    EXPECT_NEAR(t.lambda(4), (a * a - 2.0) * std::log(2.0), 1e-14);
    EXPECT_EQ(t.lambda(1), 0.0);
}

TEST(Psi, PrimeNumberTheoremBand) {
    auto t = lambda_table(make_builtin(Builtin::riemann_zeta), 10000000);
    for (double x = 1e4; x <= 1e7; x *= 1.5) {
        double r = t.psi(x) / x;
        EXPECT_GE(r, 0.9) << x;
        EXPECT_LE(r, 1.1) << x;
    }
}

TEST(Psi, PoleFreeBuiltinsStayInSquareRootBand) {
    for (auto d : {make_builtin(Builtin::ramanujan_delta), curve_37a()}) {
        auto t = lambda_table(d, 1000000, cached());
        for (double x = 1e3; x <= 1e6; x *= 1.1) EXPECT_LE(std::abs(t.psi(x)), std::pow(x, 0.75)) << d.name() << " " << x;
    }
}

TEST(Cache, RoundTripAndCorruption) {
    auto primes = prime_coefficients(curve_37a(), 1000, {});
    auto path = scratch("roundtrip.coef").string();
    write_cache(path, primes);
    auto back = try_read_cache(path);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->cutoff, primes.cutoff);
    EXPECT_EQ(back->degree, 2);
    ASSERT_EQ(back->entries.size(), primes.entries.size());
    for (std::size_t i = 0; i < primes.entries.size(); ++i) {
        EXPECT_EQ(back->entries[i].p, primes.entries[i].p);
        EXPECT_EQ(back->entries[i].a, primes.entries[i].a);
        EXPECT_EQ(back->entries[i].bad, primes.entries[i].bad);
    }
    EXPECT_FALSE(try_read_cache(scratch("absent.coef").string()).has_value());
    std::filesystem::resize_file(path, 100);
    EXPECT_THROW(try_read_cache(path), ParseError);
}

TEST(Budget, RefusesLargeUncachedRuns) {
    CoefficientOptions o;
    o.compute_budget = 1000;
    EXPECT_THROW(prime_coefficients(make_builtin(Builtin::ramanujan_delta), 5000, o), DomainError);
    EXPECT_NO_THROW(prime_coefficients(make_builtin(Builtin::riemann_zeta), 5000, o));
}

TEST(ExternalTable, ParsesAndFindsCutoff) {
    auto path = scratch("ext.txt");
    {
        std::ofstream f(path);
        f << "# p a flag\n2 0.5\n3 -0.25 good\n\n5 0.1 bad\n7 0.0\n13 1.0\n";
    }
    BuiltinParams p;
    p.table = ExternalTable{path.string(), 2, 11.0};
    auto d = make_builtin(Builtin::external_table, p);
    auto t = prime_coefficients(d, 7);
    EXPECT_EQ(t.cutoff, 7u);
    EXPECT_EQ(t.entries.size(), 4u);
    EXPECT_TRUE(t.at(5).bad);
    EXPECT_THROW(prime_coefficients(d, 13), RangeError);  // 11 is missing
    {
        std::ofstream f(path);
        f << "2 0.5\n4 0.1\n";
    }
    EXPECT_THROW(prime_coefficients(d, 2), ParseError);
}
