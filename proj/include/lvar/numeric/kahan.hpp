#pragma once

#include <cmath>
#include <complex>

namespace lvar {

// Neumaier's variant of compensated summation.
template <class T = double>
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(T init) : sum_(init) {}

    KahanSum& add(T x) {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }
    KahanSum& operator+=(T x) { return add(x); }

    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

template <>
class KahanSum<std::complex<double>> {
public:
    KahanSum() = default;
    KahanSum& add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
        return *this;
    }
    KahanSum& operator+=(std::complex<double> z) { return add(z); }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum<double> re_, im_;
};

}  // namespace lvar
