#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "lvar/numeric/kahan.hpp"

namespace lvar {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 200000;
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t intervals = 0;
    bool converged = true;
};

namespace detail {

// 21-point Gauss-Kronrod abscissae/weights, embedded 10-point Gauss rule on the odd nodes.
inline constexpr std::array<double, 11> gk21_x = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> gk21_wk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> gk21_wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    double fc = f(c);
    double kron = fc * gk21_wk[10];
    double gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        double dx = r * gk21_x[j];
        double s = f(c - dx) + f(c + dx);
        kron += gk21_wk[j] * s;
        if (j % 2 == 1) gauss += gk21_wg[j / 2] * s;
    }
    return {a, b, kron * r, std::abs((kron - gauss) * r)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod quadrature: always bisects the segment with the
// largest error estimate. Needs no knowledge of where f is rough.
template <class F>
QuadResult integrate(F f, double a, double b, const QuadOptions& opt = {}) {
    QuadResult res;
    if (a == b) return res;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<detail::Segment> heap;
    std::vector<detail::Segment> frozen;
    heap.push(detail::gk21(f, a, b));
    double total = heap.top().value;
    double err = heap.top().error;
    std::size_t n = 1;
    while (!heap.empty()) {
        double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (err <= tol) break;
        if (n >= opt.max_intervals) {
            res.converged = false;
            break;
        }
        detail::Segment s = heap.top();
        heap.pop();
        double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b) ||
            (s.b - s.a) < 64 * std::numeric_limits<double>::epsilon() * std::max(std::abs(s.a), std::abs(s.b))) {
            // cannot split further; keep its estimate
            frozen.push_back(s);
            continue;
        }
        detail::Segment l = detail::gk21(f, s.a, m);
        detail::Segment r = detail::gk21(f, m, s.b);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++n;
    }
    // re-sum from the pieces to drop the running-update roundoff
    KahanSum<> v, e;
    for (auto& s : frozen) {
        v += s.value;
        e += s.error;
    }
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    res.value = sign * v.value();
    res.abs_error = e.value();
    res.intervals = n;
    if (res.abs_error > std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value))) res.converged = false;
    return res;
}

// Integrate over consecutive pieces [x0,x1], [x1,x2], ...; each piece gets the
// full tolerance share rel_tol.
template <class F>
QuadResult integrate_pieces(F f, const std::vector<double>& knots, const QuadOptions& opt = {}) {
    QuadResult total;
    KahanSum<> v, e;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        QuadResult r = integrate(f, knots[i], knots[i + 1], opt);
        v += r.value;
        e += r.abs_error;
        total.intervals += r.intervals;
        total.converged = total.converged && r.converged;
    }
    total.value = v.value();
    total.abs_error = e.value();
    return total;
}

}  // namespace lvar
