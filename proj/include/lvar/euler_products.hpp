#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "lvar/coefficients.hpp"
#include "lvar/error.hpp"
#include "lvar/lfunc_registry.hpp"
#include "lvar/numeric/constants.hpp"
#include "lvar/numeric/kahan.hpp"
#include "lvar/numeric/zeta.hpp"

namespace lvar {

struct TruncationPolicy {
    std::uint64_t P = 100000;  // prime cutoff
    int L = 8;                 // minimum local exponent; series continue until their terms vanish
    double eps = 1e-2;         // principal-value radius for rcs_integrand

    void validate() const {
        if (P < 100) throw DomainError("TruncationPolicy: P must be >= 100");
        if (L < 4) throw DomainError("TruncationPolicy: L must be >= 4");
        if (!(eps > 0.0)) throw DomainError("TruncationPolicy: eps must be positive");
    }
};

struct EulerProductValue {
    cplx value;
    std::uint64_t prime_cutoff = 0;
    int local_power_cutoff = 0;  // largest l reached by any local series
    double tail_estimate = 0.0;  // estimated |value| change from primes > P
    double drift = 0.0;          // relative change between cutoffs P/2 and P
};

namespace detail {

inline constexpr int max_local_terms = 400;
inline constexpr double local_tol = 1e-18;

// Visits (p, local factor) for p <= P and reports whether p is in the lower half (p <= P/2).
template <class Visit>
void for_each_local(const PrimeCoefficientTable& primes, std::uint64_t P, Visit visit) {
    if (primes.cutoff < P)
        throw RangeError(primes.desc_name + ": prime table stops at " + std::to_string(primes.cutoff) +
                         ", policy needs " + std::to_string(P));
    for (const auto& e : primes.entries) {
        if (e.p > P) break;
        visit(e.p, local_factor(primes, e), e.p <= P / 2);
    }
}

// Running sums for the two cutoffs P/2 and P.
struct TwoCutoffSum {
    KahanSum<cplx> half, full;
    void add(cplx z, bool lower) {
        full += z;
        if (lower) half += z;
    }
};

// sum_{l >= 1} w(l) |s_l|^2 x^l to convergence, with s_l from the Satake recursion.
template <class Weight>
cplx satake_series(const LocalFactor& lf, cplx x, Weight w, int min_terms, int& reached) {
    KahanSum<cplx> acc;
    cplx xl = 1.0;
    double s_prev = 2.0, s = lf.a;  // s_0, s_1 for the quadratic recursion
    for (int l = 1; l <= max_local_terms; ++l) {
        xl *= x;
        double sl;
        if (lf.quadratic()) {
            sl = s;
            double next = lf.a * s - s_prev;
            s_prev = s;
            s = next;
        } else {
            sl = std::pow(lf.a, l);
        }
        cplx wx = w(l) * xl;
        cplx term = wx * (sl * sl);
        acc += term;
        reached = std::max(reached, l);
        // |s_l| <= 2 under Ramanujan; the envelope keeps accidental zeros of s_l from stopping early
        if (l >= min_terms && std::abs(wx) * std::max(4.0, sl * sl) <= local_tol * std::max(1.0, std::abs(acc.value())))
            break;
    }
    return acc.value();
}

// log of the local factor of (F x Fbar) at x = p^{-s}: sum_l |s_l|^2 / l x^l
inline cplx log_tensor_local(const LocalFactor& lf, cplx x, int min_terms, int& reached) {
    return satake_series(lf, x, [](int l) { return 1.0 / l; }, min_terms, reached);
}

// log of the local factor of H = (F x Fbar) / zeta: sum_l (|s_l|^2 - 1) / l x^l
inline cplx log_h_local(const LocalFactor& lf, cplx x, int min_terms, int& reached) {
    cplx zeta_part = -std::log(1.0 - x);
    return log_tensor_local(lf, x, min_terms, reached) - zeta_part;
}

inline cplx ppow(std::uint64_t p, cplx s) { return std::exp(-s * std::log(double(p))); }

// mean |a_F(p)|^2 over P/2 < p <= P: the density of the prime tail
inline double tail_density(const PrimeCoefficientTable& primes, std::uint64_t P) {
    KahanSum<> acc;
    std::size_t n = 0;
    for (const auto& e : primes.entries) {
        if (e.p > P) break;
        if (e.p <= P / 2) continue;
        acc += e.a * e.a;
        ++n;
    }
    return n ? acc.value() / double(n) : 0.0;
}

// E_1(x) = int_x^inf e^{-t}/t dt
inline double expint_e1(double x) { return -std::expint(-x); }

}  // namespace detail

// (F x Fbar)(s) = prod_p exp(sum_l l |b_F(p^l)|^2 p^{-ls}), Re s > 1.
inline EulerProductValue tensor_product_FxF(const PrimeCoefficientTable& primes, cplx s, const TruncationPolicy& pol) {
    pol.validate();
    if (!(s.real() > 1.0)) throw DomainError("tensor_product_FxF: need Re(s) > 1");
    detail::TwoCutoffSum acc;
    int reached = 0;
    detail::for_each_local(primes, pol.P, [&](std::uint64_t p, const LocalFactor& lf, bool lower) {
        acc.add(detail::log_tensor_local(lf, detail::ppow(p, s), pol.L, reached), lower);
    });
    cplx v = std::exp(acc.full.value());
    cplx vh = std::exp(acc.half.value());
    double sigma = s.real();
    double c = detail::tail_density(primes, pol.P);
    double tail_log = c * detail::expint_e1((sigma - 1.0) * std::log(double(pol.P)));
    EulerProductValue out;
    out.value = v;
    out.prime_cutoff = pol.P;
    out.local_power_cutoff = reached;
    out.tail_estimate = std::abs(v) * std::expm1(tail_log);
    out.drift = std::abs(v - vh) / std::abs(v);
    return out;
}

struct ResidueEstimate {
    double value;
    double spread;  // relative disagreement of the last two extrapolants
    int levels;
};

// r = lim_{sigma -> 1+} (sigma - 1)(F x Fbar)(sigma): Richardson (Neville) extrapolation
// of f(h) = h (F x Fbar)(1 + h) on h = 2^{-j}, j = 1..levels. The missing primes > P
// are restored through exp(c E_1(h log P)), c the local mean of |a_F(p)|^2.
inline ResidueEstimate residue_FxF(const PrimeCoefficientTable& primes, const TruncationPolicy& pol, int levels = 5) {
    pol.validate();
    if (levels < 2) throw DomainError("residue_FxF: need at least 2 levels");
    const double c = detail::tail_density(primes, pol.P);
    const double logP = std::log(double(pol.P));
    std::vector<double> h(levels), f(levels);
    for (int j = 0; j < levels; ++j) {
        h[j] = std::ldexp(1.0, -(j + 1));
        KahanSum<> acc;
        int reached = 0;
        detail::for_each_local(primes, pol.P, [&](std::uint64_t p, const LocalFactor& lf, bool) {
            acc += detail::log_tensor_local(lf, std::pow(double(p), -(1.0 + h[j])), pol.L, reached).real();
        });
        double lg = acc.value() + c * detail::expint_e1(h[j] * logP);
        f[j] = h[j] * std::exp(lg);
    }
    // Neville's table at 0; T[i] after round k interpolates nodes i..i+k
    std::vector<double> T = f, prev_diag;
    double last = T[levels - 1], before_last = T[levels - 1];
    for (int k = 1; k < levels; ++k) {
        for (int i = 0; i + k < levels; ++i) T[i] = (h[i + k] * T[i] - h[i] * T[i + 1]) / (h[i + k] - h[i]);
        before_last = last;
        last = T[0];
    }
    double spread = std::abs(last - before_last) / std::max(std::abs(last), 1e-300);
    if (!(std::abs(last) > 1e-6))
        throw ConvergenceError("residue_FxF(" + primes.desc_name + "): no pole detected (extrapolated residue " +
                               std::to_string(last) + ")");
    if (spread > 0.1)
        throw ConvergenceError("residue_FxF(" + primes.desc_name + "): extrapolation spread " + std::to_string(spread));
    return {last, spread, levels};
}

// H_P(1) with H = (F x Fbar) / zeta: the residue read off the pole-free part.
inline double residue_from_pole_free_part(const PrimeCoefficientTable& primes, const TruncationPolicy& pol) {
    pol.validate();
    KahanSum<> acc;
    int reached = 0;
    detail::for_each_local(primes, pol.P, [&](std::uint64_t p, const LocalFactor& lf, bool) {
        acc += detail::log_h_local(lf, 1.0 / double(p), pol.L, reached).real();
    });
    return std::exp(acc.value());
}

namespace detail {

// Local factor of A_F(r): sum over h+m = k+n of a(p^m) a(p^n) mu(p^h) mu(p^k) / p^{-rm + n + (1+r)k}
// times exp(sum_l |s_l|^2/l (2 p^{-l} - p^{-l(1-r)} - p^{-l(1+r)})), returned as its log.
// Grouping by j = h+m = k+n gives sum_j c_j d_j with
//   c_j = sum_{h+m=j} a(p^m) p^{rm} mu(p^h),  d_j = sum_{k+n=j} a(p^n) p^{-n} mu(p^k) p^{-(1+r)k}.
inline cplx log_a_local(const LocalFactor& lf, std::uint64_t p, cplx r, int min_terms, int& reached) {
    const double pd = double(p);
    const cplx pr = std::exp(r * std::log(pd));  // p^r
    const std::vector<double> mu = lf.inverse(2);
    const double mu1 = mu[1], mu2 = mu[2];
    const cplx w1 = 1.0 / pr / pd;  // p^{-(1+r)}
    // a(p^m) by the local recursion, kept for m = j, j-1, j-2
    double am0 = 1.0, am1 = 0.0, am2 = 0.0;  // a(p^j), a(p^{j-1}), a(p^{j-2})
    cplx prj = 1.0;                          // p^{rj}
    double pinv_j = 1.0;                     // p^{-j}
    KahanSum<cplx> acc;
    for (int j = 0; j <= max_local_terms; ++j) {
        if (j > 0) {
            double next = lf.a * am0 - (lf.quadratic() ? am1 : 0.0);
            am2 = am1;
            am1 = am0;
            am0 = next;
            prj *= pr;
            pinv_j /= pd;
        }
        // c_j: m = j, j-1, j-2 with h = 0, 1, 2
        cplx c = am0 * prj;
        if (j >= 1) c += mu1 * am1 * prj / pr;
        if (j >= 2) c += mu2 * am2 * prj / (pr * pr);
        // d_j: n = j, j-1, j-2 with k = 0, 1, 2
        cplx d = am0 * pinv_j;
        if (j >= 1) d += mu1 * am1 * pinv_j * pd * w1;
        if (j >= 2) d += mu2 * am2 * pinv_j * pd * pd * w1 * w1;
        cplx term = c * d;
        acc += term;
        reached = std::max(reached, j);
        if (j >= min_terms && std::abs(term) < local_tol && std::abs(prj) * pinv_j * (j + 3) * (j + 3) < local_tol)
            break;
    }
    cplx lg = std::log(acc.value());
    // exponential correction
    const double lp = std::log(pd);
    cplx corr = satake_series(
        lf, 1.0,
        [&](int l) {
            double pl = std::pow(pd, -double(l));
            return (2.0 * pl - std::exp(-double(l) * (1.0 - r) * lp) - std::exp(-double(l) * (1.0 + r) * lp)) /
                   double(l);
        },
        min_terms, reached);
    return lg + corr;
}

// Local bracket of B_F(r), literally: the combinatorial m n-weighted sum plus the l^3 |b|^2 sum.
inline cplx b_local(const LocalFactor& lf, std::uint64_t p, cplx r, int min_terms, int& reached) {
    const double pd = double(p);
    const cplx y = std::exp(-(1.0 + r) * std::log(pd));  // p^{-(1+r)}
    const std::vector<double> mu = lf.inverse(2);
    // C_j = sum_{h+m=j} m a(p^m) mu(p^h); the k+n=j side is the same real sequence.
    double am0 = 1.0, am1 = 0.0, am2 = 0.0;
    KahanSum<cplx> comb;
    cplx yj = 1.0;
    for (int j = 0; j <= max_local_terms; ++j) {
        if (j > 0) {
            double next = lf.a * am0 - (lf.quadratic() ? am1 : 0.0);
            am2 = am1;
            am1 = am0;
            am0 = next;
            yj *= y;
        }
        double C = j * am0;
        if (j >= 1) C += mu[1] * (j - 1) * am1;
        if (j >= 2) C += mu[2] * (j - 2) * am2;
        cplx term = C * C * yj;
        comb += term;
        reached = std::max(reached, j);
        if (j >= min_terms && std::abs(yj) * (j + 2.0) * (j + 2.0) * (j + 2.0) * (j + 2.0) *
                                      std::max(1.0, lf.a * lf.a) < local_tol)
            break;
    }
    // sum_l l^3 |b(p^l)|^2 y^l = sum_l l |s_l|^2 y^l
    cplx cubic = satake_series(lf, y, [](int l) { return double(l); }, min_terms, reached);
    return -comb.value() + cubic;
}

// second derivative of log H at s: sum_p sum_l (|s_l|^2 - 1) l (log p)^2 p^{-ls}
inline cplx log_h_second_local(const LocalFactor& lf, std::uint64_t p, cplx s, int min_terms, int& reached) {
    const double lp = std::log(double(p));
    const cplx x = ppow(p, s);
    cplx with = satake_series(lf, x, [](int l) { return double(l); }, min_terms, reached);
    // subtract the zeta part sum_l l x^l = x / (1-x)^2
    return lp * lp * (with - x / ((1.0 - x) * (1.0 - x)));
}

}  // namespace detail

struct PrimeSumValue {
    cplx value;
    cplx half_cutoff_value;  // same quantity truncated at P/2
    int local_power_cutoff;
};

inline PrimeSumValue a_f_detail(const PrimeCoefficientTable& primes, cplx r, const TruncationPolicy& pol) {
    pol.validate();
    if (!(std::abs(r.real()) < 0.25)) throw DomainError("a_f: need |Re r| < 1/4");
    detail::TwoCutoffSum acc;
    int reached = 0;
    detail::for_each_local(primes, pol.P, [&](std::uint64_t p, const LocalFactor& lf, bool lower) {
        acc.add(detail::log_a_local(lf, p, r, pol.L, reached), lower);
    });
    return {std::exp(acc.full.value()), std::exp(acc.half.value()), reached};
}

// A_F(r)
inline cplx a_f(const PrimeCoefficientTable& primes, cplx r, const TruncationPolicy& pol) {
    return a_f_detail(primes, r, pol).value;
}

inline PrimeSumValue b_f_detail(const PrimeCoefficientTable& primes, cplx r, const TruncationPolicy& pol) {
    pol.validate();
    if (!(r.real() > -0.5)) throw DomainError("b_f: need Re r > -1/2");
    detail::TwoCutoffSum acc;
    int reached = 0;
    detail::for_each_local(primes, pol.P, [&](std::uint64_t p, const LocalFactor& lf, bool lower) {
        double lp = std::log(double(p));
        acc.add(lp * lp * detail::b_local(lf, p, r, pol.L, reached), lower);
    });
    return {acc.full.value(), acc.half.value(), reached};
}

// B_F(r)
inline cplx b_f(const PrimeCoefficientTable& primes, cplx r, const TruncationPolicy& pol) {
    return b_f_detail(primes, r, pol).value;
}

// A(r) = prod_p (1 - p^{-1-r})(1 - 2/p + p^{-1-r}) / (1 - 1/p)^2, truncated at P.
inline cplx zeta_A(cplx r, std::uint64_t P) {
    if (!(std::abs(r.real()) < 0.25)) throw DomainError("zeta_A: need |Re r| < 1/4");
    KahanSum<cplx> acc;
    for_each_prime(P, [&](std::uint64_t p) {
        double pd = double(p);
        cplx y = std::exp(-(1.0 + r) * std::log(pd));
        acc += std::log((1.0 - y) * (1.0 - 2.0 / pd + y)) - 2.0 * std::log1p(-1.0 / pd);
    });
    return std::exp(acc.value());
}

// B(r) = sum_p (log p / (p^{1+r} - 1))^2, truncated at P.
inline cplx zeta_B(cplx r, std::uint64_t P) {
    if (!(r.real() > -0.5)) throw DomainError("zeta_B: need Re r > -1/2");
    KahanSum<cplx> acc;
    for_each_prime(P, [&](std::uint64_t p) {
        double lp = std::log(double(p));
        cplx q = lp / (std::exp((1.0 + r) * lp) - 1.0);
        acc += q * q;
    });
    return acc.value();
}

struct RcsValue {
    cplx value;             // g(eta, t); the regular part alone at eta = 0
    cplx regular;           // g + i ell / eta
    double pole_coefficient;  // ell: g = -i ell / eta + O(1)
    double drift;           // relative change of g between cutoffs P/2 and P
    bool flagged;           // drift above 1e-3
};

namespace detail {

struct RcsParts {
    cplx log_zeta_pp_regular;  // (log zeta)''(1 + i eta) + 1/eta^2
    cplx zeta_pair;            // eta^2 zeta(1 - i eta) zeta(1 + i eta)
    cplx log_h_pp[2];          // (log H)''(1 + i eta), cutoffs P/2 and P
    cplx h_pair[2];            // H(1 - i eta) H(1 + i eta) / r^2
    cplx a[2];
    cplx b[2];
};

inline RcsParts rcs_parts(const PrimeCoefficientTable& primes, double eta, const TruncationPolicy& pol) {
    RcsParts out{};
    const cplx u(0.0, eta);
    const cplx s = 1.0 + u;
    // zeta = G(u)/u with G(u) = 1 + u R(1+u)
    auto G = [](cplx uu) { return 1.0 + uu * zeta_regular(1.0 + uu); };
    cplx R0 = zeta_regular(s), R1 = zeta_regular_derivative(s, 1), R2 = zeta_regular_derivative(s, 2);
    cplx g0 = 1.0 + u * R0, g1 = R0 + u * R1, g2 = 2.0 * R1 + u * R2;
    out.log_zeta_pp_regular = g2 / g0 - (g1 / g0) * (g1 / g0);
    out.zeta_pair = G(u) * G(-u);

    TwoCutoffSum lhpp, lhp, lhm, lh1, la, lb;
    int reached = 0;
    for_each_local(primes, pol.P, [&](std::uint64_t p, const LocalFactor& lf, bool lower) {
        double pd = double(p);
        lhpp.add(log_h_second_local(lf, p, s, pol.L, reached), lower);
        lhp.add(log_h_local(lf, ppow(p, s), pol.L, reached), lower);
        lhm.add(log_h_local(lf, ppow(p, 1.0 - u), pol.L, reached), lower);
        lh1.add(log_h_local(lf, 1.0 / pd, pol.L, reached), lower);
        la.add(log_a_local(lf, p, u, pol.L, reached), lower);
        double lp = std::log(pd);
        lb.add(lp * lp * b_local(lf, p, u, pol.L, reached), lower);
    });
    for (int k = 0; k < 2; ++k) {
        auto val = [k](const TwoCutoffSum& t) { return k == 0 ? t.half.value() : t.full.value(); };
        out.log_h_pp[k] = val(lhpp);
        out.h_pair[k] = std::exp(val(lhp) + val(lhm) - 2.0 * val(lh1));
        out.a[k] = std::exp(val(la));
        out.b[k] = val(lb);
    }
    return out;
}

// g + i ell / eta from the parts at one cutoff; exact algebra, no small-eta expansion.
inline cplx rcs_regular(const RcsParts& q, int k, double eta, double ell) {
    const cplx I(0.0, 1.0);
    cplx Q = q.a[k] * q.zeta_pair * q.h_pair[k];
    cplx phase = std::exp(-I * eta * ell);
    double e2 = eta * eta;
    cplx pole_free = (phase - 1.0 + I * eta * ell) / e2 + phase * (Q - 1.0) / e2;
    return pole_free + q.log_zeta_pp_regular + q.log_h_pp[k] - q.b[k];
}

}  // namespace detail

// ell = log(q_F (|t|+2)^{d_F} / (2 pi)^{d_F})
inline double rcs_log_factor(const LFunctionDescriptor& desc, double t) {
    double d = degree(desc);
    return std::log(conductor(desc)) + d * (std::log(std::abs(t) + 2.0) - constants::log_two_pi);
}

// g(eta, t) = ((F x Fbar)'/(F x Fbar))'(1 + i eta) - B_F(i eta)
//   + r^{-2} e^{-i eta ell} A_F(i eta) (F x Fbar)(1 - i eta) (F x Fbar)(1 + i eta),
// evaluated through (F x Fbar) = zeta H with the zeta pole handled analytically and
// r = H_P(1), so the eta^{-2} terms cancel exactly. For |eta| < eps the regular part is
// interpolated from eta = +-eps, +-2 eps and the pole -i ell/eta added back; at eta = 0
// only the regular (principal-value) part is returned.
inline RcsValue rcs_integrand(const LFunctionDescriptor& desc, const PrimeCoefficientTable& primes, double eta,
                              double t, const TruncationPolicy& pol) {
    pol.validate();
    const double ell = rcs_log_factor(desc, t);
    const cplx I(0.0, 1.0);
    auto regular_at = [&](double e, cplx (&reg)[2]) {
        detail::RcsParts q = detail::rcs_parts(primes, e, pol);
        reg[0] = detail::rcs_regular(q, 0, e, ell);
        reg[1] = detail::rcs_regular(q, 1, e, ell);
    };
    cplx reg[2];
    if (std::abs(eta) >= pol.eps) {
        regular_at(eta, reg);
    } else {
        const double nodes[4] = {-2.0 * pol.eps, -pol.eps, pol.eps, 2.0 * pol.eps};
        cplx vals[4][2];
        for (int i = 0; i < 4; ++i) regular_at(nodes[i], vals[i]);
        for (int k = 0; k < 2; ++k) {
            cplx acc = 0.0;
            for (int i = 0; i < 4; ++i) {
                double w = 1.0;
                for (int j = 0; j < 4; ++j)
                    if (j != i) w *= (eta - nodes[j]) / (nodes[i] - nodes[j]);
                acc += w * vals[i][k];
            }
            reg[k] = acc;
        }
    }
    auto full = [&](cplx r) { return eta == 0.0 ? r : r - I * ell / eta; };
    RcsValue out;
    out.regular = reg[1];
    out.value = full(reg[1]);
    out.pole_coefficient = ell;
    cplx other = full(reg[0]);
    out.drift = std::abs(out.value - other) / std::max(1.0, std::abs(out.value));
    out.flagged = out.drift > 1e-3;
    return out;
}

// Two-branch main term of the smoothed form factor over [-T, T].
inline double form_factor_prediction(const LFunctionDescriptor& desc, double X, double T) {
    if (!(T > 2.0 * constants::pi)) throw DomainError("form_factor_prediction: need T > 2 pi");
    if (!(X >= 1.0)) throw DomainError("form_factor_prediction: need X >= 1");
    const double d = degree(desc);
    if (std::log(X) < d * std::log(T)) return T * std::log(X) / constants::pi;
    return T / constants::pi * (d * std::log(T / (2.0 * constants::pi)) + std::log(conductor(desc)) - d);
}

}  // namespace lvar
