#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lvar/error.hpp"
#include "lvar/numeric/constants.hpp"

namespace lvar {

// One factor Gamma(lambda s + mu) of the completed L-function.
struct GammaFactor {
    double lambda;
    std::complex<double> mu;
};

struct RiemannZeta {};
struct RamanujanDelta {};

// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct EllipticCurve {
    std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    std::uint64_t conductor = 0;
};

// Prime coefficients read from a text file; degree and conductor come from
// the config because they cannot be recovered from the coefficients.
struct ExternalTable {
    std::string path;
    int degree = 1;
    double conductor = 1.0;
};

using CoefficientSource = std::variant<RiemannZeta, RamanujanDelta, EllipticCurve, ExternalTable>;

class LFunctionDescriptor {
public:
    LFunctionDescriptor(std::string name, double q_scale, std::vector<GammaFactor> gamma,
                        std::complex<double> root_number, int pole_order, CoefficientSource source)
        : name_(std::move(name)), q_(q_scale), gamma_(std::move(gamma)), eps_(root_number),
          pole_order_(pole_order), source_(std::move(source)) {
        if (!(q_ > 0.0)) throw DomainError("descriptor " + name_ + ": Q must be positive");
        if (gamma_.empty()) throw DomainError("descriptor " + name_ + ": no gamma factors");
        for (auto& g : gamma_) {
            if (!(g.lambda > 0.0)) throw DomainError("descriptor " + name_ + ": lambda must be positive");
            if (g.mu.real() < 0.0) throw DomainError("descriptor " + name_ + ": Re(mu) must be >= 0");
        }
        if (std::abs(std::abs(eps_) - 1.0) > 1e-12)
            throw DomainError("descriptor " + name_ + ": |root number| must be 1");
        if (pole_order_ < 0) throw DomainError("descriptor " + name_ + ": negative pole order");
    }

    const std::string& name() const { return name_; }
    double q_scale() const { return q_; }
    const std::vector<GammaFactor>& gamma_factors() const { return gamma_; }
    std::complex<double> root_number() const { return eps_; }
    int pole_order() const { return pole_order_; }
    const CoefficientSource& source() const { return source_; }

private:
    std::string name_;
    double q_;
    std::vector<GammaFactor> gamma_;
    std::complex<double> eps_;
    int pole_order_;
    CoefficientSource source_;
};

// d_F = 2 * sum lambda_j
inline double degree(const LFunctionDescriptor& d) {
    double s = 0.0;
    for (auto& g : d.gamma_factors()) s += g.lambda;
    return 2.0 * s;
}

// q_F = (2 pi)^{d_F} Q^2 prod lambda_j^{2 lambda_j}
inline double conductor(const LFunctionDescriptor& d) {
    double lg = degree(d) * constants::log_two_pi + 2.0 * std::log(d.q_scale());
    for (auto& g : d.gamma_factors()) lg += 2.0 * g.lambda * std::log(g.lambda);
    return std::exp(lg);
}

// Degree rounded to the nearest integer; the coefficient machinery only knows 1 and 2.
inline int local_degree(const LFunctionDescriptor& d) {
    double deg = degree(d);
    int k = int(std::lround(deg));
    if (std::abs(deg - k) > 1e-9 || k < 1 || k > 2)
        throw DomainError("descriptor " + d.name() + ": only degree 1 and 2 local factors are supported");
    return k;
}

// Discriminant of the long Weierstrass model.
inline __int128 discriminant(const EllipticCurve& e) {
    __int128 a1 = e.a1, a2 = e.a2, a3 = e.a3, a4 = e.a4, a6 = e.a6;
    __int128 b2 = a1 * a1 + 4 * a2;
    __int128 b4 = 2 * a4 + a1 * a3;
    __int128 b6 = a3 * a3 + 4 * a6;
    __int128 b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

enum class Builtin { riemann_zeta, ramanujan_delta, elliptic_curve, external_table };

struct BuiltinParams {
    std::string name;
    std::optional<EllipticCurve> curve;
    std::optional<ExternalTable> table;
    std::complex<double> root_number = 1.0;
};

inline LFunctionDescriptor make_builtin(Builtin kind, const BuiltinParams& params = {}) {
    using constants::pi;
    switch (kind) {
        case Builtin::riemann_zeta:
            return {params.name.empty() ? "zeta" : params.name, 1.0 / std::sqrt(pi), {{0.5, 0.0}}, 1.0, 1,
                    RiemannZeta{}};
        case Builtin::ramanujan_delta:
            return {params.name.empty() ? "delta" : params.name, 1.0 / (2.0 * pi), {{1.0, 5.5}}, 1.0, 0,
                    RamanujanDelta{}};
        case Builtin::elliptic_curve: {
            if (!params.curve) throw DomainError("elliptic_curve: missing curve coefficients");
            const EllipticCurve& e = *params.curve;
            if (e.conductor == 0) throw DomainError("elliptic_curve: missing conductor");
            if (discriminant(e) == 0) throw DomainError("elliptic_curve: singular curve (discriminant 0)");
            return {params.name.empty() ? "ec" + std::to_string(e.conductor) : params.name,
                    std::sqrt(double(e.conductor)) / (2.0 * pi), {{1.0, 0.5}}, params.root_number, 0, e};
        }
        case Builtin::external_table: {
            if (!params.table) throw DomainError("external_table: missing table parameters");
            const ExternalTable& t = *params.table;
            if (t.degree < 1 || t.degree > 2) throw DomainError("external_table: degree must be 1 or 2");
            if (!(t.conductor >= 1.0)) throw DomainError("external_table: conductor must be >= 1");
            // d copies of Gamma(s/2): q = (2 pi)^d Q^2 2^{-d}, solve for Q
            std::vector<GammaFactor> g(std::size_t(t.degree), GammaFactor{0.5, 0.0});
            double Q = std::sqrt(t.conductor / std::pow(pi, t.degree));
            return {params.name.empty() ? "external" : params.name, Q, g, params.root_number, 0, t};
        }
    }
    throw DomainError("make_builtin: unknown kind");
}

// The rank-one curve y^2 + y = x^3 - x of conductor 37.
inline LFunctionDescriptor curve_37a() {
    BuiltinParams p;
    p.name = "curve37a";
    p.curve = EllipticCurve{0, 0, 1, -1, 0, 37};
    p.root_number = -1.0;
    return make_builtin(Builtin::elliptic_curve, p);
}

}  // namespace lvar
