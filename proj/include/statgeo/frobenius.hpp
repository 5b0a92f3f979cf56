#pragma once

#include <cmath>
#include <vector>

#include "statgeo/finite_difference.hpp"
#include "statgeo/geometry.hpp"

namespace statgeo {

inline constexpr double kDefaultKappa = -2.0;

// Tangent-space multiplication d_a o d_b = A^c_ab d_c with A = kappa * C.
// kappa stays configurable: the difference-tensor route through the pencil
// gives +2, the identification with the cubic tensor gives -2, and the two
// differ only by the sign of the product.
struct MultiplicationTable {
    double kappa = kDefaultKappa;
    Tensor3 A_lower;  // A_lower(a,b,c) = A_abc
    Tensor3 A_mixed;  // A_mixed(a,b,c) = A^c_ab = g^{cd} A_abd
};

inline MultiplicationTable multiplication_constants(const ExponentialFamilyModel& model,
                                                    const Theta& theta,
                                                    double kappa = kDefaultKappa,
                                                    double condition_cap = 1e12) {
    const auto metric = fisher_metric(model, theta);
    const auto ginv = inverse_metric(metric, condition_cap);
    const auto C = amari_chentsov(model, theta);
    const std::size_t n = model.n;

    MultiplicationTable out;
    out.kappa = kappa;
    out.A_lower = Tensor3(n);
    out.A_mixed = Tensor3(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) out.A_lower(a, b, c) = kappa * C(a, b, c);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                double acc = 0.0;
                for (std::size_t d = 0; d < n; ++d)
                    acc += ginv(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d)) *
                           out.A_lower(a, b, d);
                out.A_mixed(a, b, c) = acc;
            }
    return out;
}

// max over random triples of |g(X o Y, Z) - g(X, Y o Z)|. Identically zero
// up to rounding because A is totally symmetric; the residual certifies the
// implementation, not the model.
inline double metric_invariance_residual(const ExponentialFamilyModel& model, const Theta& theta,
                                         std::size_t trials, std::uint64_t seed,
                                         double kappa = kDefaultKappa,
                                         double condition_cap = 1e12) {
    const auto metric = fisher_metric(model, theta);
    const auto table = multiplication_constants(model, theta, kappa, condition_cap);
    const std::size_t n = model.n;
    Rng rng(seed);

    auto circ = [&](const std::vector<double>& u, const std::vector<double>& v) {
        std::vector<double> w(n, 0.0);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) w[c] += table.A_mixed(a, b, c) * u[a] * v[b];
        return w;
    };
    auto inner = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double acc = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                acc += metric.g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                       u[a] * v[b];
        return acc;
    };

    double residual = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto X = rng.uniform_vector(n, -1.0, 1.0);
        const auto Y = rng.uniform_vector(n, -1.0, 1.0);
        const auto Z = rng.uniform_vector(n, -1.0, 1.0);
        residual = std::max(residual, std::abs(inner(circ(X, Y), Z) - inner(X, circ(Y, Z))));
    }
    return residual;
}

// max_{a,b,c,f} |sum_e (A^e_ab A^f_ec - A^e_bc A^f_ea)|: a diagnostic for
// how far the multiplication is from associative at this point.
inline double associativity_residual(const ExponentialFamilyModel& model, const Theta& theta,
                                     double kappa = kDefaultKappa, double condition_cap = 1e12) {
    const auto table = multiplication_constants(model, theta, kappa, condition_cap);
    const std::size_t n = model.n;
    double residual = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t f = 0; f < n; ++f) {
                    double acc = 0.0;
                    for (std::size_t e = 0; e < n; ++e)
                        acc += table.A_mixed(a, b, e) * table.A_mixed(e, c, f) -
                               table.A_mixed(b, c, e) * table.A_mixed(e, a, f);
                    residual = std::max(residual, std::abs(acc));
                }
    return residual;
}

// max |A_abc - D^3(kappa psi)_abc| with the third derivatives taken by
// central differences; the potential of A is kappa times the log partition
// function.
inline double potentiality_residual(const ExponentialFamilyModel& model, const Theta& theta,
                                    double step = 1e-3, double kappa = kDefaultKappa) {
    const auto C = amari_chentsov(model, theta);
    const std::size_t n = model.n;
    auto potential = [&](const Theta& t) { return kappa * log_partition(model, t); };
    double residual = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b <= a; ++b)
            for (std::size_t c = 0; c <= b; ++c) {
                const double fd = central_third(potential, theta, a, b, c, step);
                residual = std::max(residual, std::abs(kappa * C(a, b, c) - fd));
            }
    return residual;
}

struct PencilConnection {
    double lambda = 0.0;
    Tensor3 mixed;  // mixed(i,j,l) = Gamma_lambda^l_{ij}
};

// Gamma_lambda = Gamma^0 + lambda * A in mixed form. With kappa = -2 this
// reproduces the alpha pencil at alpha = 4 lambda.
inline PencilConnection pencil_connection(const ExponentialFamilyModel& model, const Theta& theta,
                                          double lambda, double kappa = kDefaultKappa,
                                          double condition_cap = 1e12) {
    const auto levi_civita = alpha_christoffels(model, theta, 0.0, condition_cap);
    const auto table = multiplication_constants(model, theta, kappa, condition_cap);
    const std::size_t n = model.n;
    PencilConnection out;
    out.lambda = lambda;
    out.mixed = Tensor3(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l)
                out.mixed(i, j, l) = levi_civita.mixed(i, j, l) + lambda * table.A_mixed(i, j, l);
    return out;
}

}  // namespace statgeo
