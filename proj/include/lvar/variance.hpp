#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lvar/coefficients/tables.hpp"
#include "lvar/error.hpp"
#include "lvar/numeric/kahan.hpp"
#include "lvar/numeric/parallel.hpp"

namespace lvar {

enum class VarianceKind { tilde, delta };

struct VarianceResult {
    VarianceKind kind;
    double X;
    double step;  // h for tilde, delta for the delta form
    double value;
    double normalized;  // value / (h X) or value / (delta X^2)
};

namespace detail {
// Exact integral over [a, b] of a linear function squared, given its end values.
inline double square_linear_integral(double a, double b, double ua, double ub) {
    return (b - a) * (ua * ua + ua * ub + ub * ub) / 3.0;
}
}  // namespace detail

// tilde V_F(X, h) = int_1^X (psi_F(x+h) - psi_F(x) - m_F h)^2 dx.
// On [n, n+1) the integrand takes two constant values: with H = floor(h), phi = h - H,
// floor(x+h) = n+H for x < n+1-phi and n+H+1 after, so each unit cell is two rectangles.
inline VarianceResult v_tilde(const CoefficientTable& t, double X, double h) {
    if (!(h >= 1.0)) throw DomainError("v_tilde: need h >= 1");
    if (!(X >= h)) throw DomainError("v_tilde: need h <= X");
    if (X + h > double(t.N)) throw RangeError("v_tilde: table too short (need X + h <= N)");
    const double m = double(t.pole_order);
    const auto H = std::uint64_t(std::floor(h));
    const double phi = h - double(H);
    const double mh = m * h;
    const auto& psi = t.psi_prefix;
    const auto last = std::uint64_t(std::floor(X));
    KahanSum<> acc;
    for (std::uint64_t n = 1; n < last; ++n) {
        double c0 = psi[n + H] - psi[n] - mh;
        double c1 = psi[n + H + 1] - psi[n] - mh;
        acc += (1.0 - phi) * c0 * c0 + phi * c1 * c1;
    }
    // partial cell [last, X]
    double width = X - double(last);
    if (width > 0.0) {
        double split = std::min(width, 1.0 - phi);
        double c0 = psi[last + H] - psi[last] - mh;
        acc += split * c0 * c0;
        if (width > split) {
            double c1 = psi[last + H + 1] - psi[last] - mh;
            acc += (width - split) * c1 * c1;
        }
    }
    double v = acc.value();
    return {VarianceKind::tilde, X, h, v, v / (h * X)};
}

// V_F(X, delta) = int_1^X (psi_F(x(1+delta)) - psi_F(x) - m_F delta x)^2 dx.
// Breakpoints are the integers and the points n/(1+delta); between two of them the
// integrand is (c - m delta x)^2 and is integrated in closed form.
inline VarianceResult v_delta(const CoefficientTable& t, double X, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("v_delta: need 0 < delta <= 1");
    if (!(X >= 1.0)) throw DomainError("v_delta: need X >= 1");
    const double scale = 1.0 + delta;
    if (X * scale > double(t.N)) throw RangeError("v_delta: table too short (need X(1+delta) <= N)");
    const double k = double(t.pole_order) * delta;
    const auto& psi = t.psi_prefix;
    KahanSum<> acc;
    double x = 1.0;
    std::uint64_t i = 1;                                   // floor(x)
    auto j = std::uint64_t(std::floor(x * scale));         // floor(x(1+delta))
    while (x < X) {
        double next_i = double(i + 1);
        double next_j = double(j + 1) / scale;
        double nx = std::min({next_i, next_j, X});
        if (nx > x) {
            double c = psi[j] - psi[i];
            acc += detail::square_linear_integral(x, nx, c - k * x, c - k * nx);
        }
        if (nx == next_i) ++i;
        if (nx == next_j) ++j;
        x = nx;
    }
    double v = acc.value();
    return {VarianceKind::delta, X, delta, v, v / (delta * X * X)};
}

struct VarianceCurve {
    std::string desc_name;
    VarianceKind kind = VarianceKind::tilde;
    double X = 0.0;
    std::vector<VarianceResult> grid;
    std::uint64_t N = 0;
    std::int64_t timestamp = 0;  // seconds since epoch; metadata only, never written to CSV
};

// `steps` are the h (or delta) values; they must be strictly increasing.
inline VarianceCurve variance_curve(const CoefficientTable& t, double X, VarianceKind kind,
                                    const std::vector<double>& steps) {
    for (std::size_t i = 1; i < steps.size(); ++i)
        if (!(steps[i] > steps[i - 1])) throw DomainError("variance_curve: grid must be strictly increasing");
    VarianceCurve c;
    c.desc_name = t.desc_name;
    c.kind = kind;
    c.X = X;
    c.N = t.N;
    c.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
    c.grid.resize(steps.size());
    parallel_for(steps.size(), [&](std::size_t i) {
        c.grid[i] = kind == VarianceKind::tilde ? v_tilde(t, X, steps[i]) : v_delta(t, X, steps[i]);
    });
    return c;
}

// n values h = X e^{-u} with u = log(X/h) evenly spaced over [u_min, u_max];
// returned in increasing h.
inline std::vector<double> log_spaced_h(double X, double u_min, double u_max, std::size_t n) {
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = n == 1 ? u_min : u_max - (u_max - u_min) * double(i) / double(n - 1);
        h[i] = X * std::exp(-u);
    }
    return h;
}

}  // namespace lvar
