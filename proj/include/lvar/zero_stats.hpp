#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "lvar/coefficients/tables.hpp"
#include "lvar/error.hpp"
#include "lvar/numeric/constants.hpp"
#include "lvar/numeric/kahan.hpp"
#include "lvar/numeric/quadrature.hpp"

namespace lvar {

struct ZeroList {
    std::vector<double> ordinates;  // strictly ascending
    bool reflect = false;           // ordinates are >= 0 and stand for +-gamma
    std::string source;

    // Signed ordinates with |gamma| <= T, ascending. gamma = 0 in a reflected list counts once.
    std::vector<double> signed_window(double T) const {
        std::vector<double> out;
        if (reflect) {
            for (auto it = ordinates.rbegin(); it != ordinates.rend(); ++it)
                if (*it > 0.0 && *it <= T) out.push_back(-*it);
        }
        for (double g : ordinates)
            if (std::abs(g) <= T) out.push_back(g);
        return out;
    }

    // N(a, b): number of signed zeros with a < gamma <= b
    std::size_t count(double a, double b) const {
        auto w = signed_window(std::numeric_limits<double>::infinity());
        return std::size_t(std::upper_bound(w.begin(), w.end(), b) - std::upper_bound(w.begin(), w.end(), a));
    }

    double max_abs() const {
        if (ordinates.empty()) return 0.0;
        return std::max(std::abs(ordinates.front()), std::abs(ordinates.back()));
    }

    void validate() const {
        for (std::size_t i = 0; i < ordinates.size(); ++i) {
            if (!std::isfinite(ordinates[i])) throw DomainError(source + ": non-finite ordinate");
            if (i > 0 && !(ordinates[i] > ordinates[i - 1]))
                throw DomainError(source + ": ordinates not strictly ascending at index " + std::to_string(i));
        }
        if (reflect && !ordinates.empty() && ordinates.front() < 0.0)
            throw DomainError(source + ": reflected list holds a negative ordinate");
    }
};

// One decimal ordinate per line; blank lines and '#' comments are skipped.
inline ZeroList load_zeros(const std::string& path, bool reflect) {
    std::ifstream in(path);
    if (!in) throw RangeError("cannot read zero list " + path);
    ZeroList z;
    z.reflect = reflect;
    z.source = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        const char* first = line.data() + b;
        const char* last = line.data() + e + 1;
        double v;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v))
            throw ParseError(path + ":" + std::to_string(lineno) + ": not a number: '" + std::string(first, last) + "'");
        if (reflect && v < 0.0) throw ParseError(path + ":" + std::to_string(lineno) + ": negative ordinate in reflected list");
        if (!z.ordinates.empty() && !(v > z.ordinates.back()))
            throw ParseError(path + ":" + std::to_string(lineno) + ": ordinate " + std::string(first, last) +
                             " does not exceed the previous one");
        z.ordinates.push_back(v);
    }
    return z;
}

// Band widths beyond which pair weights fall below 1e-15.
inline double poisson_band() { return std::sqrt(4.0 / 1e-15); }  // 4/(4+u^2) < 1e-15
inline double gaussian_band() { return 6.0; }                     // e^{-u^2} < 1e-15

namespace detail {

// sum over pairs of signed ordinates of cos((g - g') log X) w(g - g'), skipping |g - g'| > band.
template <class Weight>
double banded_pair_sum(const std::vector<double>& g, double X, Weight w, double band) {
    const double lx = std::log(X);
    const std::size_t n = g.size();
    KahanSum<> off;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = g[j] - g[i];
            if (d > band) break;
            row += std::cos(d * lx) * w(d);
        }
        off += row;
    }
    return double(n) * w(0.0) + 2.0 * off.value();
}

}  // namespace detail

// F(X, T) = sum_{-T <= g, g' <= T} X^{i(g - g')} 4/(4 + (g - g')^2)
inline double f_statistic(const ZeroList& z, double X, double T, double band = poisson_band()) {
    if (!(X >= 1.0)) throw DomainError("f_statistic: need X >= 1");
    if (!(T > 0.0)) throw DomainError("f_statistic: need T > 0");
    return detail::banded_pair_sum(z.signed_window(T), X, [](double u) { return 4.0 / (4.0 + u * u); }, band);
}

// Gaussian-weighted form factor: weight e^{-(g - g')^2}
inline double f_tilde(const ZeroList& z, double X, double T, double band = gaussian_band()) {
    if (!(X >= 1.0)) throw DomainError("f_tilde: need X >= 1");
    if (!(T > 0.0)) throw DomainError("f_tilde: need T > 0");
    return detail::banded_pair_sum(z.signed_window(T), X, [](double u) { return std::exp(-u * u); }, band);
}

// I(X, T) = int_{-T}^{T} |sum_{|g| <= Z} X^{ig} / (1 + (t - g)^2)|^2 dt
inline QuadResult i_integral(const ZeroList& z, double X, double T, double Z, double rel_tol = 1e-6) {
    if (!(Z >= T)) throw DomainError("i_integral: need Z >= T");
    std::vector<double> g = z.signed_window(Z);
    if (g.empty()) return {};
    const double lx = std::log(X);
    std::vector<std::complex<double>> c(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) c[k] = std::polar(1.0, g[k] * lx);
    auto f = [&](double t) {
        std::complex<double> s = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            double d = t - g[k];
            s += c[k] / (1.0 + d * d);
        }
        return std::norm(s);
    };
    // knots at unit spacing keep every bump resolved
    std::vector<double> knots;
    auto pieces = std::size_t(std::ceil(2.0 * T));
    for (std::size_t i = 0; i <= pieces; ++i) knots.push_back(-T + 2.0 * T * double(i) / double(pieces));
    QuadOptions opt;
    opt.rel_tol = rel_tol * 1e-2;
    opt.abs_tol = 1e-14;
    QuadResult r = integrate_pieces(f, knots, opt);
    if (!r.converged || r.abs_error > rel_tol * std::abs(r.value))
        throw ConvergenceError("i_integral: quadrature did not reach the requested accuracy");
    return r;
}

// (pi/2) int_{-ymax}^{ymax} |sum_{|g| <= Z} e^{i g (log X + y)}|^2 e^{-2|y|} dy: the Fourier-side
// form of I over the whole line.
inline QuadResult i_integral_fourier(const ZeroList& z, double X, double Z, double ymax = 40.0) {
    std::vector<double> g = z.signed_window(Z);
    if (g.empty()) return {};
    const double lx = std::log(X);
    auto f = [&](double y) {
        std::complex<double> s = 0.0;
        for (double gk : g) s += std::polar(1.0, gk * (lx + y));
        return std::norm(s) * std::exp(-2.0 * std::abs(y));
    };
    double gmax = 0.0;
    for (double gk : g) gmax = std::max(gmax, std::abs(gk));
    // resolve the fastest oscillation, period 2 pi / (2 gmax)
    double width = std::min(1.0, constants::pi / std::max(gmax, 1.0));
    std::vector<double> knots;
    auto pieces = std::size_t(std::ceil(2.0 * ymax / width));
    for (std::size_t i = 0; i <= pieces; ++i) knots.push_back(-ymax + 2.0 * ymax * double(i) / double(pieces));
    QuadOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-14;
    QuadResult r = integrate_pieces(f, knots, opt);
    r.value *= constants::pi / 2.0;
    r.abs_error *= constants::pi / 2.0;
    return r;
}

struct ExplicitFormulaResult {
    double lhs;       // psi(x(1+delta)) - psi(x) - m delta x
    double zero_sum;  // -sum a(rho) x^rho
    double residual;  // lhs - zero_sum
    double envelope;  // quoted error terms with constant 1
};

// Explicit-formula check for one (x, delta) with zeros |gamma| <= Z on the critical line.
inline ExplicitFormulaResult explicit_formula_residual(const CoefficientTable& t, const ZeroList& z, double x,
                                                       double delta, double Z) {
    if (!(x > 1.0)) throw DomainError("explicit_formula_residual: need x > 1");
    if (!(delta > 0.0)) throw DomainError("explicit_formula_residual: need delta > 0");
    if (!(Z >= 0.0)) throw DomainError("explicit_formula_residual: need Z >= 0");
    if (x * (1.0 + delta) > double(t.N)) throw RangeError("explicit_formula_residual: x(1+delta) beyond table");
    if (Z > 0.0) {
        bool covered = !z.ordinates.empty() && z.ordinates.back() >= Z && (z.reflect || z.ordinates.front() <= -Z);
        if (!covered)
            throw RangeError("explicit_formula_residual: zero list does not cover |gamma| <= " + std::to_string(Z));
    }
    const double lhs = t.psi(x * (1.0 + delta)) - t.psi(x) - double(t.pole_order) * delta * x;
    const double lx = std::log(x), l1d = std::log1p(delta);
    KahanSum<> acc;
    for (double g : z.signed_window(Z)) {
        const std::complex<double> rho(0.5, g);
        // a(rho) x^rho = ((1+delta)^rho - 1) x^rho / rho
        std::complex<double> a = (std::exp(rho * l1d) - 1.0) / rho;
        acc += (a * std::exp(rho * lx)).real();
    }
    const double zero_sum = -acc.value();
    auto dist = [](double v) { return std::abs(v - std::nearbyint(v)); };
    auto term = [&](double v) {
        double d = dist(v);
        return lx * (d > 0.0 && Z > 0.0 ? std::min(1.0, x / (Z * d)) : 1.0);
    };
    double env = term(x) + term(x * (1.0 + delta));
    if (Z > 0.0) {
        double lxz = std::log(x * Z);
        env += x / Z * lxz * lxz;
    } else {
        env = std::numeric_limits<double>::infinity();
    }
    return {lhs, zero_sum, lhs - zero_sum, env};
}

enum class SynthKind { picket, uniform };

struct SynthParams {
    SynthKind kind = SynthKind::picket;
    std::size_t count = 0;
    double spacing = 1.0;  // picket
    double T = 1.0;        // uniform range [0, T]
    std::uint64_t seed = 0;
    bool reflect = false;
};

// Uniform doubles in [0, 1) from the top 53 bits, so lists are identical across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline ZeroList synth_zeros(const SynthParams& p) {
    ZeroList z;
    z.reflect = p.reflect;
    if (p.kind == SynthKind::picket) {
        if (!(p.spacing > 0.0)) throw DomainError("synth_zeros: spacing must be positive");
        z.source = "picket:" + std::to_string(p.spacing);
        for (std::size_t j = 1; j <= p.count; ++j) z.ordinates.push_back(double(j) * p.spacing);
        return z;
    }
    if (!(p.T > 0.0)) throw DomainError("synth_zeros: T must be positive");
    z.source = "uniform:seed=" + std::to_string(p.seed);
    std::mt19937_64 rng(p.seed);
    for (std::size_t j = 0; j < p.count; ++j) z.ordinates.push_back(p.T * unit_uniform(rng));
    std::sort(z.ordinates.begin(), z.ordinates.end());
    z.ordinates.erase(std::unique(z.ordinates.begin(), z.ordinates.end()), z.ordinates.end());
    return z;
}

}  // namespace lvar
