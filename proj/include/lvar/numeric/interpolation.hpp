#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lvar/error.hpp"

namespace lvar {

// Samples of f on a uniform grid x0, x0+step, ..., read back with local cubic
// (four-point Newton form) interpolation. Cubics are reproduced, and constants
// come back bit-exact because their differences vanish.
class TabulatedFunction {
public:
    TabulatedFunction(double x0, double step, std::vector<double> values)
        : x0_(x0), step_(step), v_(std::move(values)) {
        if (!(step_ > 0.0)) throw DomainError("TabulatedFunction: step must be positive");
        if (v_.size() < 4) throw DomainError("TabulatedFunction: need at least 4 samples");
    }

    static TabulatedFunction sample(const std::function<double(double)>& f, double lo, double hi, std::size_t n) {
        if (n < 4 || !(hi > lo)) throw DomainError("TabulatedFunction::sample: bad range or count");
        double step = (hi - lo) / double(n - 1);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = f(lo + step * double(i));
        return TabulatedFunction(lo, step, std::move(v));
    }

    double lo() const { return x0_; }
    double hi() const { return x0_ + step_ * double(v_.size() - 1); }
    double step() const { return step_; }
    bool covers(double a, double b) const {
        double eps = 1e-9 * step_;
        return a >= lo() - eps && b <= hi() + eps;
    }

    double operator()(double x) const {
        double u = (x - x0_) / step_;
        if (u < -1e-9 || u > double(v_.size() - 1) + 1e-9)
            throw RangeError("TabulatedFunction: x=" + std::to_string(x) + " outside tabulated range");
        std::ptrdiff_t n = std::ptrdiff_t(v_.size());
        std::ptrdiff_t i = std::ptrdiff_t(std::floor(u)) - 1;
        if (i < 0) i = 0;
        if (i > n - 4) i = n - 4;
        double t = u - double(i);  // nodes at t = 0,1,2,3
        // nested first differences vanish exactly on constant data
        double d1 = v_[i + 1] - v_[i];
        double d2 = (v_[i + 2] - v_[i + 1]) - d1;
        double d3 = ((v_[i + 3] - v_[i + 2]) - (v_[i + 2] - v_[i + 1])) - d2;
        return v_[i] + t * (d1 + (t - 1.0) / 2.0 * (d2 + (t - 2.0) / 3.0 * d3));
    }

private:
    double x0_, step_;
    std::vector<double> v_;
};

}  // namespace lvar
