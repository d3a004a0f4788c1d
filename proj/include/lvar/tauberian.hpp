#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "lvar/error.hpp"
#include "lvar/numeric/constants.hpp"
#include "lvar/numeric/interpolation.hpp"
#include "lvar/numeric/kahan.hpp"
#include "lvar/numeric/quadrature.hpp"

namespace lvar {

enum class KernelKind { fejer, k_eta, exp_weight };

struct KernelSpec {
    KernelKind kind = KernelKind::fejer;
    double kappa = 0.0;  // fejer
    double eta = 0.0;    // k_eta
    double Y = 0.0;      // exp_weight

    void validate() const {
        if (kind == KernelKind::fejer && !(kappa > 0.0)) throw DomainError("KernelSpec: kappa must be positive");
        if (kind == KernelKind::k_eta && !(eta > 0.0)) throw DomainError("KernelSpec: eta must be positive");
    }
};

struct FejerResult {
    double value;
    double abs_error;   // quadrature error estimate
    double tail_bound;  // bound on the part of the oscillatory tail left out
    double U;           // truncation point actually used (a multiple of pi/kappa)
};

// I(kappa) = int (sin(kappa u)/u)^2 f(u) du over the real line.
// [-U, U] is integrated in half-periods pi/kappa. Beyond U, sin^2 = (1 - cos 2 kappa u)/2:
// the smooth half is integrated after u = 1/v, and the cosine half, with U on a zero of
// sin(2 kappa U), is bounded by two integrations by parts. That bound assumes f varies
// slowly beyond U; an f oscillating at frequency near 2 kappa (cos(2 kappa u), say) leaves
// an O(1/U) tail the bound does not see.
inline FejerResult fejer_functional(const std::function<double(double)>& f, double kappa, double U,
                                    double tol = 1e-8) {
    KernelSpec{KernelKind::fejer, kappa}.validate();
    if (!(U >= 10.0 / kappa)) throw DomainError("fejer_functional: need U >= 10/kappa");
    const double half = constants::pi / kappa;
    const auto pieces = std::size_t(std::ceil(U / half));
    U = double(pieces) * half;
    auto kernel = [kappa](double u) {
        double x = kappa * u;
        if (std::abs(x) < 1e-4) {
            double x2 = x * x;
            return kappa * kappa * (1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 45.0);
        }
        double s = std::sin(x) / u;
        return s * s;
    };
    std::vector<double> knots;
    for (std::size_t i = 0; i <= 2 * pieces; ++i) knots.push_back(-U + double(i) * half);
    QuadOptions opt;
    opt.abs_tol = tol / double(4 * pieces);
    opt.rel_tol = 1e-12;
    QuadResult body = integrate_pieces([&](double u) { return kernel(u) * f(u); }, knots, opt);
    QuadOptions topt;
    topt.abs_tol = tol / 8.0;
    topt.rel_tol = 1e-12;
    QuadResult tail = integrate([&](double v) { return v == 0.0 ? 0.0 : 0.5 * (f(1.0 / v) + f(-1.0 / v)); }, 0.0,
                                1.0 / U, topt);
    double bound = (std::abs(f(U)) + std::abs(f(-U))) / (kappa * kappa * U * U * U);
    if (bound > tol)
        throw ConvergenceError("fejer_functional: tail bound exceeds tolerance; increase U");
    return {body.value + tail.value, body.abs_error + tail.abs_error, bound, U};
}

// Main term when int_{-T}^{T} f = T (c log T + D) + o(T):
//   I(kappa) ~ (pi/2) kappa (c log(1/kappa) + D + c (2 - gamma_0 - log 2)).
// With c = 1, D = A this is log(1/kappa) + B, B = A + 2 - gamma_0 - log 2.
inline double lemma1_prediction(double kappa, double c, double D) {
    using namespace constants;
    return 0.5 * pi * kappa * (c * std::log(1.0 / kappa) + D + c * (2.0 - euler_gamma - log_two));
}

// Transform of K_eta: 1 on |t| <= 1, cos^2(pi(|t|-1)/(2 eta)) up to 1+eta, 0 beyond.
inline double k_eta_hat(double t, double eta) {
    if (!(eta > 0.0)) throw DomainError("k_eta_hat: eta must be positive");
    double a = std::abs(t);
    if (a <= 1.0) return 1.0;
    if (a >= 1.0 + eta) return 0.0;
    double c = std::cos(constants::pi * (a - 1.0) / (2.0 * eta));
    return c * c;
}

namespace detail {

// sin(y)/y and its first two derivatives, with series near 0
inline std::array<double, 3> sinc3(double y) {
    if (std::abs(y) < 1e-2) {
        double y2 = y * y;
        return {1.0 - y2 / 6.0 + y2 * y2 / 120.0 - y2 * y2 * y2 / 5040.0,
                y * (-1.0 / 3.0 + y2 / 30.0 - y2 * y2 / 840.0),
                -1.0 / 3.0 + y2 / 10.0 - y2 * y2 / 168.0 + y2 * y2 * y2 / 6480.0};
    }
    double s = std::sin(y), c = std::cos(y);
    return {s / y, (y * c - s) / (y * y), -s / y - 2.0 * c / (y * y) + 2.0 * s / (y * y * y)};
}

// sin(pi z/2)/z, finite at z = 0
inline double half_sinc(double z) {
    double y = constants::pi * z / 2.0;
    return constants::pi / 2.0 * sinc3(y)[0];
}

}  // namespace detail

// K_eta(x) = (sin 2 pi x + sin 2 pi (1+eta) x) / (2 pi x (1 - 4 eta^2 x^2)), written as
// sin(pi(2+eta)x) cos(pi eta x) / (pi x (1 - 2 eta x)(1 + 2 eta x)) and evaluated through
// sinc pieces so x = 0 and x = +-1/(2 eta) need no special casing.
inline double k_eta(double x, double eta) {
    if (!(eta > 0.0)) throw DomainError("k_eta: eta must be positive");
    using constants::pi;
    double a = std::abs(x);
    double sa = (2.0 + eta) * detail::sinc3(pi * (2.0 + eta) * a)[0];  // sin(pi(2+eta)a)/(pi a)
    double z = 1.0 - 2.0 * eta * a;                                     // cos(pi eta a) = sin(pi z/2)
    return sa * detail::half_sinc(z) / (1.0 + 2.0 * eta * a);
}

namespace detail {

// K'' = A'' B + 2 A' B' + A B'' with A = sin(pi(2+eta)x)/(pi x), B = cos(pi eta x)/(1 - 4 eta^2 x^2)
inline double k_eta_second_direct(double x, double eta) {
    using constants::pi;
    const double w = pi * (2.0 + eta);
    auto s = sinc3(w * x);
    const double A = (2.0 + eta) * s[0], A1 = (2.0 + eta) * w * s[1], A2 = (2.0 + eta) * w * w * s[2];
    const double b = pi * eta;
    const double c = std::cos(b * x), c1 = -b * std::sin(b * x), c2 = -b * b * c;
    const double D = 1.0 - 4.0 * eta * eta * x * x, D1 = -8.0 * eta * eta * x, D2 = -8.0 * eta * eta;
    const double B = c / D;
    const double B1 = (c1 * D - c * D1) / (D * D);
    const double B2 = c2 / D - 2.0 * c1 * D1 / (D * D) - c * D2 / (D * D) + 2.0 * c * D1 * D1 / (D * D * D);
    return A2 * B + 2.0 * A1 * B1 + A * B2;
}

}  // namespace detail

// K_eta''(x). Within 4h of x0 = +-1/(2 eta) the quotient rule cancels badly, so the value
// there comes from 8-point Lagrange interpolation on x0 +- h, +-2h, +-3h, +-4h.
inline double k_eta_second_derivative(double x, double eta) {
    if (!(eta > 0.0)) throw DomainError("k_eta_second_derivative: eta must be positive");
    const double a = std::abs(x);  // K is even
    const double x0 = 1.0 / (2.0 * eta);
    const double h = 1e-2 * x0;
    if (std::abs(a - x0) >= 4.0 * h) return detail::k_eta_second_direct(a, eta);
    const std::array<double, 8> off = {-4, -3, -2, -1, 1, 2, 3, 4};
    double acc = 0.0;
    const double u = (a - x0) / h;
    for (std::size_t i = 0; i < 8; ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < 8; ++j)
            if (j != i) w *= (u - off[j]) / (off[i] - off[j]);
        acc += w * detail::k_eta_second_direct(x0 + off[i] * h, eta);
    }
    return acc;
}

struct TransformCheck {
    double integral;    // int_0^inf K''(x) (sin(pi t x)/(pi t))^2 dx
    double hat;         // k_eta_hat(t, eta)
    double difference;  // integral - hat
    double abs_error;   // quadrature error plus tail bound
};

// Checks hat K_eta(t) = int_0^inf K_eta''(x) (sin(pi t x)/(pi t))^2 dx.
inline TransformCheck lemma2_transform_identity(double eta, double t, double xmax = 1e4) {
    if (!(eta > 0.0)) throw DomainError("lemma2_transform_identity: eta must be positive");
    if (t == 0.0) throw DomainError("lemma2_transform_identity: need t != 0");
    const double pt = constants::pi * t;
    auto f = [&](double x) {
        double s = std::sin(pt * x) / pt;
        return k_eta_second_derivative(x, eta) * s * s;
    };
    // pieces shorter than a quarter of either oscillation period
    const double width = 0.25 / std::max({1.0, std::abs(t), 2.0 + eta});
    std::vector<double> knots;
    const double x0 = 1.0 / (2.0 * eta);
    for (double x = 0.0; x < xmax; x += width) knots.push_back(x);
    knots.push_back(xmax);
    knots.push_back(x0);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-10;
    QuadResult r = integrate_pieces(f, knots, opt);
    if (!r.converged) throw ConvergenceError("lemma2_transform_identity: quadrature failed");
    // |K''(x)| <= C / (eta^2 x^3) for x >> x0, with C = (pi(2+eta))^2 (2+eta)/pi dominating
    const double C = (2.0 + eta) * constants::pi * (2.0 + eta) * (2.0 + eta) / (eta * eta);
    const double tail = C / (2.0 * xmax * xmax) / (pt * pt);
    double hat = k_eta_hat(t, eta);
    return {r.value, hat, r.value - hat, r.abs_error + tail};
}

struct Lemma3Result {
    double hypothesis_deviation;  // max over T in [Y, Y + log 2] of |int f(T+y) e^{-2|y|} dy - 1|
    double conclusion;            // int_0^{log 2} f(Y+y) e^{2y} dy
};

namespace detail {

// Composite Simpson on [a, b] with n = 2^k panels; the integer weights are summed first so a
// constant integrand comes out exact whenever (b - a)/n is exact.
template <class F>
double simpson_pow2(F f, double a, double b, int k) {
    const std::size_t n = std::size_t(1) << k;
    const double h = (b - a) / double(n);
    KahanSum<> s;
    for (std::size_t i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * f(a + h * double(i));
    }
    return h * s.value() / 3.0;
}

}  // namespace detail

// Both sides of the exponential-weight lemma for tabulated f. Integrals run in the variables
// s = e^{-|y|} (hypothesis) and w = e^{2y} (conclusion), where the weights become polynomial
// and a constant f integrates exactly.
inline Lemma3Result lemma3_check(const TabulatedFunction& f, double Y, int t_samples = 65, int simpson_log2 = 14) {
    if (!f.covers(Y - 40.0, Y + 40.0)) throw RangeError("lemma3_check: f must be tabulated on [Y-40, Y+40]");
    if (t_samples < 2) throw DomainError("lemma3_check: need at least 2 samples of T");
    auto at = [&](double x) { return f(std::clamp(x, f.lo(), f.hi())); };
    double worst = 0.0;
    for (int i = 0; i < t_samples; ++i) {
        const double T = Y + constants::log_two * double(i) / double(t_samples - 1);
        // e^{-2|y|} dy = s ds, so the s = 0 node has weight 0
        auto g = [&](double s) {
            if (s <= 0.0) return 0.0;
            double y = -std::log(s);
            return 2.0 * s * (at(T + y) + at(T - y));
        };
        double hyp = 0.5 * detail::simpson_pow2(g, 0.0, 1.0, simpson_log2);
        worst = std::max(worst, std::abs(hyp - 1.0));
    }
    double concl = 0.5 * detail::simpson_pow2([&](double w) { return at(Y + 0.5 * std::log(w)); }, 1.0, 4.0, simpson_log2);
    return {worst, concl};
}

}  // namespace lvar
