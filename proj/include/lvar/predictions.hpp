#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "lvar/error.hpp"
#include "lvar/lfunc_registry.hpp"
#include "lvar/numeric/constants.hpp"

namespace lvar {

enum class Statistic { v_tilde, v_delta, pair_correlation };
enum class Regime { degree1, regime_one, regime_two };
enum class Formula { GM, MS, A1, A2, C1, C2, D1, D2, F250, MurtyPerelli };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::degree1: return "degree1";
        case Regime::regime_one: return "regimeI";
        case Regime::regime_two: return "regimeII";
    }
    return "?";
}

inline const char* to_string(Formula f) {
    switch (f) {
        case Formula::GM: return "GM";
        case Formula::MS: return "MS";
        case Formula::A1: return "A1";
        case Formula::A2: return "A2";
        case Formula::C1: return "C1";
        case Formula::C2: return "C2";
        case Formula::D1: return "D1";
        case Formula::D2: return "D2";
        case Formula::F250: return "F250";
        case Formula::MurtyPerelli: return "MurtyPerelli";
    }
    return "?";
}

struct PredictionLine {
    Statistic statistic;
    Regime regime;
    double value;       // main term
    double normalized;  // value / (h X), value / (delta X^2), or value itself for pair correlation
    Formula formula;
};

namespace detail {
inline bool is_degree_one(double d) { return std::abs(d - 1.0) < 1e-9; }
}  // namespace detail

// h* = X^{1 - 1/d_F}; none for degree 1.
inline std::optional<double> regime_boundary(const LFunctionDescriptor& desc, double X) {
    if (!(X > 1.0)) throw DomainError("regime_boundary: need X > 1");
    double d = degree(desc);
    if (detail::is_degree_one(d) || d < 1.0) return std::nullopt;
    return std::pow(X, 1.0 - 1.0 / d);
}

// Main term of tilde V_F(X, h). Ties at h = h* go to the large-h branch (C1).
inline PredictionLine predict_v_tilde(const LFunctionDescriptor& desc, double X, double h) {
    using namespace constants;
    if (!(h > 1.0 && h < X)) throw DomainError("predict_v_tilde: need 1 < h < X");
    const double d = degree(desc);
    const double lq = std::log(conductor(desc));
    const double hX = h * X;
    if (detail::is_degree_one(d)) {
        double n = std::log(X) - std::log(h) + lq - euler_gamma - log_two_pi;
        return {Statistic::v_tilde, Regime::degree1, hX * n, n, Formula::MS};
    }
    const double log_hstar = std::log(X) * (1.0 - 1.0 / d);
    if (std::log(h) >= log_hstar) {
        double n = d * std::log(X / h) + lq - (euler_gamma + log_two_pi) * d;
        return {Statistic::v_tilde, Regime::regime_one, hX * n, n, Formula::C1};
    }
    double n = (6.0 * std::log(X) - (3.0 + 8.0 * log_two)) / 6.0;
    return {Statistic::v_tilde, Regime::regime_two, hX * n, n, Formula::C2};
}

// Main term of V_F(X, delta). A1 holds for delta >= delta* = X^{-1/d_F} (matching C1
// under h = delta X), A2 below it; ties go to A1.
inline PredictionLine predict_v_delta(const LFunctionDescriptor& desc, double X, double delta) {
    using namespace constants;
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("predict_v_delta: need 0 < delta < 1");
    if (!(X > 1.0)) throw DomainError("predict_v_delta: need X > 1");
    const double d = degree(desc);
    const double lq = std::log(conductor(desc));
    const double scale = delta * X * X;
    auto a1 = [&](Regime r) {
        double n = 0.5 * (d * std::log(1.0 / delta) + lq + (1.0 - euler_gamma - log_two_pi) * d);
        return PredictionLine{Statistic::v_delta, r, scale * n, n, Formula::A1};
    };
    if (detail::is_degree_one(d)) return a1(Regime::degree1);
    if (std::log(delta) >= -std::log(X) / d) return a1(Regime::regime_one);
    double n = (3.0 * std::log(X) - 4.0 * log_two) / 6.0;
    return {Statistic::v_delta, Regime::regime_two, scale * n, n, Formula::A2};
}

// Main term of the pair-correlation sum over [-T, T]: T log X / pi below X = T^{d_F},
// (T / pi)(d_F log(T / 2 pi) + log q_F - d_F) from X = T^{d_F} on.
inline PredictionLine predict_pair_correlation(const LFunctionDescriptor& desc, double X, double T) {
    using namespace constants;
    if (!(T > 2.0 * pi)) throw DomainError("predict_pair_correlation: need T > 2 pi");
    if (!(X >= 1.0)) throw DomainError("predict_pair_correlation: need X >= 1");
    const double d = degree(desc);
    const Regime low = detail::is_degree_one(d) ? Regime::degree1 : Regime::regime_two;
    const Regime high = detail::is_degree_one(d) ? Regime::degree1 : Regime::regime_one;
    if (std::log(X) < d * std::log(T)) {
        double v = T * std::log(X) / pi;
        return {Statistic::pair_correlation, low, v, v, Formula::MurtyPerelli};
    }
    double v = T / pi * (d * std::log(T / (2.0 * pi)) + std::log(conductor(desc)) - d);
    return {Statistic::pair_correlation, high, v, v, Formula::F250};
}

}  // namespace lvar
