#pragma once

#include <cstddef>
#include <vector>

namespace statgeo {

// Central-difference stencils over scalar fields R^n -> R. F is any
// callable taking a const std::vector<double>&.

template <typename F>
double central_partial(F&& f, std::vector<double> x, std::size_t i, double h) {
    x[i] += h;
    const double plus = f(x);
    x[i] -= 2.0 * h;
    const double minus = f(x);
    return (plus - minus) / (2.0 * h);
}

template <typename F>
double central_second(F&& f, std::vector<double> x, std::size_t a, std::size_t b, double h) {
    if (a == b) {
        const double mid = f(x);
        x[a] += h;
        const double plus = f(x);
        x[a] -= 2.0 * h;
        const double minus = f(x);
        return (plus - 2.0 * mid + minus) / (h * h);
    }
    x[a] += h;
    x[b] += h;
    const double pp = f(x);
    x[b] -= 2.0 * h;
    const double pm = f(x);
    x[a] -= 2.0 * h;
    const double mm = f(x);
    x[b] += 2.0 * h;
    const double mp = f(x);
    return (pp - pm - mp + mm) / (4.0 * h * h);
}

// Nested stencil: outer central difference in c of the second partial in
// (a,b). Costs at most 8 evaluations and is O(h^2) accurate for smooth f.
template <typename F>
double central_third(F&& f, std::vector<double> x, std::size_t a, std::size_t b, std::size_t c,
                     double h) {
    x[c] += h;
    const double plus = central_second(f, x, a, b, h);
    x[c] -= 2.0 * h;
    const double minus = central_second(f, x, a, b, h);
    return (plus - minus) / (2.0 * h);
}

}  // namespace statgeo
