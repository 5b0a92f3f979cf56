#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "statgeo/webs.hpp"

namespace statgeo {

// Element of the rank-2 split algebra in the idempotent basis e+, e-:
// e+^2 = e+, e-^2 = e-, e+ e- = 0, unit = e+ + e-. Multiplication is
// componentwise, so every algebra identity reduces to real arithmetic.
struct SplitNumber {
    double plus = 0.0;
    double minus = 0.0;

    static SplitNumber unit() { return {1.0, 1.0}; }
    static SplitNumber e_plus() { return {1.0, 0.0}; }
    static SplitNumber e_minus() { return {0.0, 1.0}; }

    friend SplitNumber operator+(SplitNumber a, SplitNumber b) {
        return {a.plus + b.plus, a.minus + b.minus};
    }
    friend SplitNumber operator-(SplitNumber a, SplitNumber b) {
        return {a.plus - b.plus, a.minus - b.minus};
    }
    friend SplitNumber operator*(SplitNumber a, SplitNumber b) {
        return {a.plus * b.plus, a.minus * b.minus};
    }
    friend SplitNumber operator*(double s, SplitNumber a) { return {s * a.plus, s * a.minus}; }
    friend bool operator==(SplitNumber a, SplitNumber b) {
        return a.plus == b.plus && a.minus == b.minus;
    }
};

// Structure constants in the idempotent basis: e_j e_k = sum_h C^h_jk e_h,
// nonzero only on the diagonal h = j = k.
inline double split_structure_constant(std::size_t h, std::size_t j, std::size_t k) {
    return (h == j && j == k) ? 1.0 : 0.0;
}

// Analyticity over the algebra means the Jacobian commutes with every
// multiplication operator: sum_h (dy_i/dx_h) C^h_jk = sum_h C^i_jh (dy_h/dx_k)
// for all i, j, k. In the idempotent basis this forces the off-diagonal
// Jacobian entries to vanish. Partials are central differences at `step`.
inline double cauchy_riemann_residual(
    const std::function<std::array<double, 2>(double, double)>& f, double x, double y,
    double step = 1e-4) {
    std::array<std::array<double, 2>, 2> jac{};  // jac[i][h] = dy_i / dx_h
    const auto px = f(x + step, y), mx = f(x - step, y);
    const auto py = f(x, y + step), my = f(x, y - step);
    for (std::size_t i = 0; i < 2; ++i) {
        jac[i][0] = (px[i] - mx[i]) / (2.0 * step);
        jac[i][1] = (py[i] - my[i]) / (2.0 * step);
    }

    double residual = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                double lhs = 0.0, rhs = 0.0;
                for (std::size_t h = 0; h < 2; ++h) {
                    lhs += jac[i][h] * split_structure_constant(h, j, k);
                    rhs += split_structure_constant(i, j, h) * jac[h][k];
                }
                residual = std::max(residual, std::abs(lhs - rhs));
            }
    return residual;
}

inline std::function<std::array<double, 2>(double, double)> builtin_split_map(
    const std::string& name) {
    if (name == "exp")
        return [](double x, double y) {
            return std::array<double, 2>{std::exp(x), std::exp(y)};
        };
    if (name == "identity")
        return [](double x, double y) { return std::array<double, 2>{x, y}; };
    if (name == "swap")
        return [](double x, double y) { return std::array<double, 2>{y, x}; };
    throw std::invalid_argument("unknown builtin map: " + name);
}

// Web function of two variables over the split algebra. Because the algebra
// is a direct sum of the two ideals, an analytic F(z1, z2) splits into
// scalar components acting on the e+ coordinates and the e- coordinates
// separately; each component defines a planar web on its own box.
struct AlgebraFunction {
    std::string name;
    std::function<double(double, double)> f_plus;   // F+(x1, x2)
    std::function<double(double, double)> f_minus;  // F-(y1, y2)
    std::function<double(double, double)> f_plus_d1, f_plus_d2;    // optional exact partials
    std::function<double(double, double)> f_minus_d1, f_minus_d2;
    std::array<double, 4> box_plus{0.0, 1.0, 0.0, 1.0};
    std::array<double, 4> box_minus{0.0, 1.0, 0.0, 1.0};
};

// The pair of subwebs carried by the two ideals, ready for the planar web
// operations. The split web closes iff both components close, so the
// componentwise reduction is the closure test for the 4-real-dimensional
// realization.
inline std::pair<WebFunction, WebFunction> subweb_decompose(const AlgebraFunction& F) {
    WebFunction plus = make_web_function(F.name + "+", F.f_plus, F.f_plus_d1, F.f_plus_d2,
                                         F.box_plus[0], F.box_plus[1], F.box_plus[2],
                                         F.box_plus[3]);
    WebFunction minus = make_web_function(F.name + "-", F.f_minus, F.f_minus_d1, F.f_minus_d2,
                                          F.box_minus[0], F.box_minus[1], F.box_minus[2],
                                          F.box_minus[3]);
    return {std::move(plus), std::move(minus)};
}

inline AlgebraFunction builtin_algebra_web(const std::string& name) {
    AlgebraFunction F;
    F.name = name;
    if (name == "sum") {
        F.f_plus = [](double a, double b) { return a + b; };
        F.f_minus = F.f_plus;
        F.f_plus_d1 = [](double, double) { return 1.0; };
        F.f_plus_d2 = F.f_plus_d1;
        F.f_minus_d1 = F.f_plus_d1;
        F.f_minus_d2 = F.f_plus_d1;
        F.box_plus = {0.0, 1.0, 0.0, 1.0};
        F.box_minus = {0.0, 1.0, 0.0, 1.0};
        return F;
    }
    if (name == "product") {
        F.f_plus = [](double a, double b) { return a * b; };
        F.f_minus = F.f_plus;
        F.f_plus_d1 = [](double, double b) { return b; };
        F.f_plus_d2 = [](double a, double) { return a; };
        F.f_minus_d1 = F.f_plus_d1;
        F.f_minus_d2 = F.f_plus_d2;
        F.box_plus = {0.5, 2.0, 0.5, 2.0};
        F.box_minus = {0.5, 2.0, 0.5, 2.0};
        return F;
    }
    if (name == "mixed") {
        // curved on the e+ side, parallel on the e- side
        F.f_plus = [](double a, double b) { return a + b + a * b * b; };
        F.f_plus_d1 = [](double, double b) { return 1.0 + b * b; };
        F.f_plus_d2 = [](double a, double b) { return 1.0 + 2.0 * a * b; };
        F.f_minus = [](double a, double b) { return a + b; };
        F.f_minus_d1 = [](double, double) { return 1.0; };
        F.f_minus_d2 = F.f_minus_d1;
        F.box_plus = {0.5, 2.0, 0.5, 2.0};
        F.box_minus = {0.0, 1.0, 0.0, 1.0};
        return F;
    }
    throw std::invalid_argument("unknown builtin algebra web: " + name);
}

// Closure defect of the split web at a pair of component centers, defined
// componentwise (the realization never gets traversed as a 4-dimensional
// figure).
inline double split_web_defect(const AlgebraFunction& F, double a_plus, double b_plus,
                               double a_minus, double b_minus, double eps) {
    const auto [plus, minus] = subweb_decompose(F);
    const double d_plus = hexagon_closure(plus, a_plus, b_plus, eps).defect;
    const double d_minus = hexagon_closure(minus, a_minus, b_minus, eps).defect;
    return std::max(d_plus, d_minus);
}

}  // namespace statgeo
