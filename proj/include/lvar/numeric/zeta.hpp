#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "lvar/numeric/constants.hpp"
#include "lvar/numeric/kahan.hpp"

namespace lvar {

using cplx = std::complex<double>;

namespace detail {

inline constexpr int em_terms = 24;

// B_{2k}/(2k)! for k = 1..em_terms, from B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}.
inline const std::array<double, em_terms + 1>& bernoulli_over_factorial() {
    static const std::array<double, em_terms + 1> table = [] {
        std::array<double, em_terms + 1> c{};
        for (int k = 1; k <= em_terms; ++k) {
            double z;
            if (k == 1) {
                z = constants::pi * constants::pi / 6.0;
            } else {
                // sum n^{-2k} to 2000, then the integral tail with its first correction
                long double acc = 0;
                const int M = 2000;
                for (int n = M; n >= 1; --n) acc += std::pow((long double)n, -2.0L * k);
                long double tail = std::pow((long double)M, 1.0L - 2.0L * k) / (2.0L * k - 1.0L) -
                                   0.5L * std::pow((long double)M, -2.0L * k);
                z = double(acc + tail);
            }
            double sign = (k % 2 == 1) ? 1.0 : -1.0;
            c[k] = sign * 2.0 * z * std::pow(2.0 * constants::pi, -2.0 * k);
        }
        return c;
    }();
    return table;
}

// (e^w - 1)/w without cancellation near w = 0.
inline cplx expm1_over(cplx w) {
    if (std::abs(w) < 0.5) {
        cplx term = 1.0, sum = 1.0;
        for (int n = 2; n < 30; ++n) {
            term *= w / double(n);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(w) - 1.0) / w;
}

}  // namespace detail

// R(s) = zeta(s) - 1/(s-1), entire. Euler-Maclaurin with the pole subtracted analytically.
inline cplx zeta_regular(cplx s) {
    const auto& c = detail::bernoulli_over_factorial();
    const int K = detail::em_terms;
    int N = int(std::ceil((std::abs(s) + 2.0 * K) / constants::pi));
    if (N < 16) N = 16;
    KahanSum<cplx> acc;
    for (int n = N - 1; n >= 1; --n) acc += std::exp(-s * std::log(double(n)));
    const double logN = std::log(double(N));
    const cplx Ns = std::exp(-s * logN);  // N^{-s}
    acc += -logN * detail::expm1_over((1.0 - s) * logN);
    acc += 0.5 * Ns;
    // sum_k c_k (s)(s+1)...(s+2k-2) N^{-s-2k+1}
    cplx rising = s;  // (s)_{1}
    cplx Npow = Ns / double(N);
    for (int k = 1; k <= K; ++k) {
        cplx term = c[k] * rising * Npow;
        acc += term;
        if (std::abs(term) < 1e-17 * std::abs(acc.value()) && k > 2) break;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        Npow /= double(N) * double(N);
    }
    return acc.value();
}

inline cplx zeta(cplx s) { return zeta_regular(s) + 1.0 / (s - 1.0); }

// k-th derivative of R at s (k = 0, 1, 2) via the Cauchy integral on a circle.
inline cplx zeta_regular_derivative(cplx s, int k, double radius = 0.25, int nodes = 48) {
    KahanSum<cplx> acc;
    for (int j = 0; j < nodes; ++j) {
        double th = 2.0 * constants::pi * j / nodes;
        cplx e = std::polar(1.0, th);
        acc += zeta_regular(s + radius * e) * std::polar(1.0, -k * th);
    }
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return acc.value() * (fact / (nodes * std::pow(radius, k)));
}

}  // namespace lvar
