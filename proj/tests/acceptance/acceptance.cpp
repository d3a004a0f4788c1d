// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below. Exits 1 if any
// criterion fails.
//
//   acceptance --zeros <first 10^4 zeta ordinates> [--cache-dir <dir>]

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lvar/lvar.hpp"
#include "lvar/testing/oracles.hpp"
#include "lvar/testing/tauberian_suite.hpp"

using namespace lvar;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [miss]");
    }
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}
std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

struct Fit {
    double slope, intercept;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Context {
    std::string zeros_path;
    CoefficientOptions coef;
};

// ---------------------------------------------------------------- criteria

constexpr double c1_X = 1.5e6, c1_umin = 3.0, c1_umax = 10.0;
constexpr std::size_t c1_points = 25;
constexpr double c1_slope_tol = 0.05, c1_intercept_tol = 0.3;

Outcome criterion1(const Context& ctx) {
    auto desc = make_builtin(Builtin::riemann_zeta);
    auto hs = log_spaced_h(c1_X, c1_umin, c1_umax, c1_points);
    auto t = lambda_table(desc, std::uint64_t(c1_X + hs.back()) + 2, ctx.coef);
    auto c = variance_curve(t, c1_X, VarianceKind::tilde, hs);
    std::vector<double> u, y;
    for (const auto& r : c.grid) {
        u.push_back(std::log(c1_X / r.step));
        y.push_back(r.normalized);
    }
    auto f = least_squares(u, y);
    const double want = -(constants::euler_gamma + std::log(2.0 * constants::pi));
    Outcome o;
    o.require(std::abs(f.slope - 1.0) <= c1_slope_tol, fmt("slope %.4f (1 +- %.2f)", f.slope, c1_slope_tol));
    o.require(std::abs(f.intercept - want) <= c1_intercept_tol,
              fmt("intercept %.4f", f.intercept) + fmt(" (%.4f +- %.1f)", want, c1_intercept_tol));
    return o;
}

constexpr double c2_X = 1e6;
constexpr std::size_t c2_points = 40;
constexpr double c2_flat_slope = 0.25, c2_level_rel = 0.15, c2_steep_slope = 2.0, c2_steep_tol = 0.35;

Outcome criterion2(const Context& ctx) {
    Outcome o;
    const double L = std::log(c2_X);
    const auto hs = log_spaced_h(c2_X, 3.0, L, c2_points);
    for (auto desc : {make_builtin(Builtin::ramanujan_delta), curve_37a()}) {
        auto t = lambda_table(desc, std::uint64_t(c2_X + hs.back()) + 2, ctx.coef);
        auto c = variance_curve(t, c2_X, VarianceKind::tilde, hs);
        std::vector<double> fu, fy, su, sy;
        for (const auto& r : c.grid) {
            double u = std::log(c2_X / r.step);
            if (u >= 0.55 * L) {
                fu.push_back(u);
                fy.push_back(r.normalized);
            } else if (u <= 0.45 * L) {
                su.push_back(u);
                sy.push_back(r.normalized);
            }
        }
        auto flat = least_squares(fu, fy);
        double level = 0.0;
        for (double v : fy) level += v / double(fy.size());
        const double want = L - (3.0 + 8.0 * std::log(2.0)) / 6.0;
        auto steep = least_squares(su, sy);
        const std::string n = desc.name() + " ";
        o.require(std::abs(flat.slope) <= c2_flat_slope, n + fmt("flat slope %.3f", flat.slope));
        o.require(rel(level, want) <= c2_level_rel, n + fmt("level %.3f vs %.3f", level, want));
        o.require(std::abs(steep.slope - c2_steep_slope) <= c2_steep_tol, n + fmt("steep slope %.3f", steep.slope));
    }
    return o;
}

constexpr double c3_tol = 1e-9;

Outcome criterion3(const Context&) {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    int n = 0;
    for (auto desc : {make_builtin(Builtin::riemann_zeta), make_builtin(Builtin::ramanujan_delta), curve_37a()}) {
        auto primes = prime_coefficients(desc, 2200);
        auto t = lambda_table(desc, primes, 2200);
        for (int i = 0; i < 20; ++i, ++n) {
            double X = 10.0 + 990.0 * unit_uniform(rng);
            if (i % 2 == 0) {
                double h = 1.0 + (X - 1.0) * unit_uniform(rng);
                worst = std::max(worst, rel(v_tilde(t, X, h).value, oracle::v_tilde(primes, desc.pole_order(), X, h)));
            } else {
                double d = 0.001 + 0.998 * unit_uniform(rng);
                worst = std::max(worst, rel(v_delta(t, X, d).value, oracle::v_delta(primes, desc.pole_order(), X, d)));
            }
        }
    }
    Outcome o;
    o.require(n == 60 && worst <= c3_tol, fmt("%.0f instances, worst relative %.2e", double(n), worst));
    return o;
}

constexpr std::uint64_t c4_P = 100000;
constexpr double c4_norm_tol = 1e-8, c4_deriv_tol = 1e-6, c4_deriv_step = 1e-4, c4_zeta_tol = 1e-6, c4_residue_tol = 0.02;

Outcome criterion4(const Context& ctx) {
    Outcome o;
    TruncationPolicy pol;
    pol.P = c4_P;
    double norm = 0.0, deriv = 0.0;
    for (auto desc : {make_builtin(Builtin::riemann_zeta), make_builtin(Builtin::ramanujan_delta), curve_37a()}) {
        auto primes = prime_coefficients(desc, c4_P, ctx.coef);
        norm = std::max(norm, std::abs(a_f(primes, 0.0, pol) - 1.0));
        cplx d = (a_f(primes, c4_deriv_step, pol) - a_f(primes, -c4_deriv_step, pol)) / (2.0 * c4_deriv_step);
        deriv = std::max(deriv, std::abs(d));
    }
    o.require(norm <= c4_norm_tol, fmt("|A_F(0) - 1| %.1e", norm));
    o.require(deriv <= c4_deriv_tol, fmt("|A_F'(0)| %.1e", deriv));

    auto zp = prime_coefficients(make_builtin(Builtin::riemann_zeta), c4_P, ctx.coef);
    double spec = 0.0;
    for (cplx r : {cplx(0.0), cplx(0.1), cplx(-0.1), cplx(0.2), cplx(-0.2), cplx(0.05, 0.5)}) {
        spec = std::max(spec, std::abs(a_f(zp, r, pol) - zeta_A(r, pol.P)));
        spec = std::max(spec, std::abs(b_f(zp, r, pol) - zeta_B(r, pol.P)));
    }
    o.require(spec <= c4_zeta_tol, fmt("zeta specialization %.1e", spec));
    auto res = residue_FxF(zp, pol);
    o.require(std::abs(res.value - 1.0) <= c4_residue_tol, fmt("zeta residue %.4f", res.value));
    return o;
}

constexpr double c5_oracle_tol = 1e-12, c5_floor = -1e-9, c5_mp_rel = 0.25;

Outcome criterion5(const Context& ctx) {
    Outcome o;
    auto zeta = load_zeros(ctx.zeros_path, true);
    const auto poisson = [](double u) { return 4.0 / (4.0 + u * u); };
    const auto gauss = [](double u) { return std::exp(-u * u); };

    double worst = 0.0;
    std::vector<ZeroList> lists;
    lists.push_back(ZeroList{std::vector<double>(zeta.ordinates.begin(), zeta.ordinates.begin() + 1000), true, "zeta"});
    for (std::uint64_t seed : {11, 12}) {
        SynthParams p;
        p.kind = SynthKind::uniform;
        p.count = 1000;
        p.T = 1500.0;
        p.seed = seed;
        p.reflect = seed == 11;
        lists.push_back(synth_zeros(p));
    }
    for (const auto& z : lists) {
        const double T = z.max_abs();
        auto w = z.signed_window(T);
        for (double X : {1.0, 50.0, T}) {
            worst = std::max(worst, rel(f_statistic(z, X, T), oracle::pair_sum(w, X, poisson)));
            worst = std::max(worst, rel(f_tilde(z, X, T), oracle::pair_sum(w, X, gauss)));
        }
    }
    o.require(worst <= c5_oracle_tol, fmt("double-loop agreement %.1e", worst));

    double lowest = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SynthParams p;
        p.kind = SynthKind::uniform;
        p.count = 50 + seed % 100;
        p.T = 20.0 + double(seed);
        p.seed = 1000 + seed;
        p.reflect = seed % 2 == 0;
        auto z = synth_zeros(p);
        lowest = std::min(lowest, f_tilde(z, 1.0 + double(seed), z.max_abs()));
    }
    o.require(lowest >= c5_floor, fmt("min F_tilde %.1e", lowest));

    const double T = zeta.max_abs(), X = T;
    const double F = f_statistic(zeta, X, T), mp = T * std::log(X) / constants::pi;
    o.require(std::abs(F / mp - 1.0) <= c5_mp_rel, fmt("F(T, T) / (T log T / pi) = %.3f", F / mp));
    return o;
}

constexpr std::size_t c6_samples = 50;
constexpr double c6_xmax = 1e4, c6_constant = 20.0;

Outcome criterion6(const Context& ctx) {
    auto z = load_zeros(ctx.zeros_path, true);
    const double Z = z.max_abs();
    std::mt19937_64 rng(6);
    std::vector<double> xs, ds;
    for (std::size_t i = 0; i < c6_samples; ++i) {
        xs.push_back(2.0 + (c6_xmax - 2.0) * unit_uniform(rng));
        ds.push_back(1e-3 * std::pow(500.0, unit_uniform(rng)));  // log-uniform on [1e-3, 0.5]
    }
    auto t = lambda_table(make_builtin(Builtin::riemann_zeta), std::uint64_t(1.5 * c6_xmax) + 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto r = explicit_formula_residual(t, z, xs[i], ds[i], Z);
        worst = std::max(worst, std::abs(r.residual) / r.envelope);
    }
    Outcome o;
    o.require(worst <= c6_constant, fmt("worst |residual| / envelope %.3f", worst));
    return o;
}

Outcome criterion7(const Context&) {
    Outcome o;
    std::size_t failed = 0, total = 0;
    double lemma3_const = -1.0;
    for (const auto& r : tauberian_suite::run()) {
        ++total;
        if (!r.pass()) {
            ++failed;
            o.require(false, r.check + fmt(" at %.3g: error %.2e", r.parameter, r.error));
        }
        if (r.check == "lemma3_constant_conclusion") lemma3_const = r.computed;
    }
    o.require(failed == 0, fmt("%.0f of %.0f kernel checks pass", double(total - failed), double(total)));
    o.require(lemma3_const == 1.5, fmt("trivial case %.17g", lemma3_const));
    return o;
}

constexpr double c8_ratio_tol = 1e-12, c8_lo = 0.9, c8_hi = 1.1, c8_delta_frac = 0.05;

Outcome criterion8(const Context& ctx) {
    Outcome o;
    const std::uint64_t P = 1000000, X = 1000000;
    auto s3 = singular_series(3, P), s2 = singular_series(2, P), s6 = singular_series(6, P);
    o.require(s3.value == 0.0, fmt("S(3) = %.1g", s3.value));
    o.require(std::abs(s6.value / s2.value - 2.0) <= c8_ratio_tol, fmt("S(6)/S(2) - 2 = %.1e", s6.value / s2.value - 2.0));
    auto tz = lambda_table(make_builtin(Builtin::riemann_zeta), X + 2, ctx.coef);
    double r = autocorrelation(tz, X, 2) / (s2.value * double(X));
    o.require(r >= c8_lo && r <= c8_hi, fmt("zeta ratio %.4f", r));
    auto td = lambda_table(make_builtin(Builtin::ramanujan_delta), X + 2, ctx.coef);
    double a = autocorrelation(td, X, 2);
    o.require(std::abs(a) <= c8_delta_frac * double(X), fmt("|delta autocorrelation| / X = %.4f", std::abs(a) / double(X)));
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    Context ctx;
    std::string cache;
    app.add_option("--zeros", ctx.zeros_path, "first 10^4 zeta zero ordinates")->required();
    app.add_option("--cache-dir", cache, "coefficient cache directory");
    CLI11_PARSE(app, argc, argv);
    if (!cache.empty()) ctx.coef.cache_dir = cache;

    const std::vector<std::pair<const char*, std::function<Outcome(const Context&)>>> criteria{
        {"1 zeta variance line", criterion1},       {"2 degree-two regimes", criterion2},
        {"3 variance oracle", criterion3},          {"4 Euler-product identities", criterion4},
        {"5 zero statistics", criterion5},          {"6 explicit formula", criterion6},
        {"7 kernel lemmas", criterion7},            {"8 prime pairs", criterion8}};
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check(ctx);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria pass\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
