#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lvar/error.hpp"

namespace lvar {

struct PrimeCoefficient {
    std::uint64_t p;
    double a;  // normalized a_F(p)
    bool bad;
};

// Normalized a_F(p) for every prime p <= cutoff.
struct PrimeCoefficientTable {
    std::string desc_name;
    std::uint64_t cutoff = 0;
    int degree = 1;
    std::vector<PrimeCoefficient> entries;

    const PrimeCoefficient& at(std::uint64_t p) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), p,
                                   [](const PrimeCoefficient& e, std::uint64_t q) { return e.p < q; });
        if (it == entries.end() || it->p != p)
            throw RangeError(desc_name + ": no coefficient for p=" + std::to_string(p));
        return *it;
    }

    // The sub-table of primes <= P.
    PrimeCoefficientTable truncated(std::uint64_t P) const {
        if (P > cutoff) throw RangeError(desc_name + ": table cutoff " + std::to_string(cutoff) + " < " + std::to_string(P));
        PrimeCoefficientTable t{desc_name, P, degree, {}};
        for (auto& e : entries) {
            if (e.p > P) break;
            t.entries.push_back(e);
        }
        return t;
    }
};

// Lambda_F(n) for 1 <= n <= N and the prefix sums psi_F(n). Index 0 is unused (0).
struct CoefficientTable {
    std::string desc_name;
    std::uint64_t N = 0;
    int pole_order = 0;
    std::vector<double> lambda_values;
    std::vector<double> psi_prefix;

    double lambda(std::uint64_t n) const { return lambda_values.at(n); }
    // psi_F(x) = sum_{n <= x} Lambda_F(n)
    double psi(double x) const {
        if (x < 1.0) return 0.0;
        auto n = std::uint64_t(std::floor(x));
        if (n > N) throw RangeError(desc_name + ": psi(" + std::to_string(x) + ") beyond table N=" + std::to_string(N));
        return psi_prefix[n];
    }
};

}  // namespace lvar
