#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "statgeo/model.hpp"
#include "statgeo/tensor.hpp"

namespace statgeo {

struct SingularMetricError : std::runtime_error {
    explicit SingularMetricError(double cond)
        : std::runtime_error("Fisher metric is numerically singular (condition number " +
                             std::to_string(cond) + ")"),
          condition_number(cond) {}
    double condition_number;
};

struct MetricTensor {
    Eigen::MatrixXd g;
    double condition_number = 0.0;  // +inf when not positive definite
    bool positive_definite = false;
};

// Covariance of the sufficient statistics under p(theta); equal to the
// Hessian of the log partition function.
inline MetricTensor fisher_metric(const ExponentialFamilyModel& model, const Theta& theta) {
    const auto p = probabilities(model, theta);
    const auto mean = mean_parameters(model, theta).mu;
    const auto n = static_cast<Eigen::Index>(model.n);

    MetricTensor out;
    out.g = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < model.m; ++j) {
        for (std::size_t i = 0; i < model.n; ++i) {
            const double di = static_cast<double>(model.Q[i][j]) - mean[i];
            for (std::size_t k = i; k < model.n; ++k) {
                const double dk = static_cast<double>(model.Q[k][j]) - mean[k];
                out.g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) += p[j] * di * dk;
            }
        }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < i; ++k) out.g(i, k) = out.g(k, i);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.g);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    out.positive_definite = lo > 0.0;
    out.condition_number =
        out.positive_definite ? hi / lo : std::numeric_limits<double>::infinity();
    return out;
}

inline Eigen::MatrixXd inverse_metric(const MetricTensor& metric, double condition_cap = 1e12) {
    if (!metric.positive_definite || metric.condition_number > condition_cap)
        throw SingularMetricError(metric.condition_number);
    return metric.g.inverse();
}

using CubicTensor = Tensor3;

// Third central moment of the statistics; equal to the third derivative
// array of the log partition function, totally symmetric.
inline CubicTensor amari_chentsov(const ExponentialFamilyModel& model, const Theta& theta) {
    const auto p = probabilities(model, theta);
    const auto mean = mean_parameters(model, theta).mu;
    CubicTensor C(model.n);
    std::vector<double> d(model.n);
    for (std::size_t j = 0; j < model.m; ++j) {
        for (std::size_t i = 0; i < model.n; ++i)
            d[i] = static_cast<double>(model.Q[i][j]) - mean[i];
        for (std::size_t a = 0; a < model.n; ++a)
            for (std::size_t b = 0; b < model.n; ++b)
                for (std::size_t c = 0; c < model.n; ++c)
                    C(a, b, c) += p[j] * d[a] * d[b] * d[c];
    }
    return C;
}

struct ChristoffelArray {
    double alpha = 0.0;
    Tensor3 lower;  // lower(i,j,k) = Gamma^(alpha)_{ij,k}
    Tensor3 mixed;  // mixed(i,j,l) = Gamma^(alpha)l_{ij} = g^{lk} lower(i,j,k)
};

// In canonical coordinates the metric is the Hessian of psi, so the
// Levi-Civita symbols are (1/2) d^3 psi = (1/2) C and the alpha pencil
// collapses to a single scaling of the cubic tensor.
inline ChristoffelArray alpha_christoffels(const ExponentialFamilyModel& model,
                                           const Theta& theta, double alpha,
                                           double condition_cap = 1e12) {
    const auto metric = fisher_metric(model, theta);
    const auto ginv = inverse_metric(metric, condition_cap);
    const auto C = amari_chentsov(model, theta);
    const double scale = (1.0 - alpha) / 2.0;

    ChristoffelArray out;
    out.alpha = alpha;
    out.lower = Tensor3(model.n);
    out.mixed = Tensor3(model.n);
    for (std::size_t i = 0; i < model.n; ++i)
        for (std::size_t j = 0; j < model.n; ++j)
            for (std::size_t k = 0; k < model.n; ++k)
                out.lower(i, j, k) = scale * C(i, j, k);
    for (std::size_t i = 0; i < model.n; ++i)
        for (std::size_t j = 0; j < model.n; ++j)
            for (std::size_t l = 0; l < model.n; ++l) {
                double acc = 0.0;
                for (std::size_t k = 0; k < model.n; ++k)
                    acc += ginv(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) *
                           out.lower(i, j, k);
                out.mixed(i, j, l) = acc;
            }
    return out;
}

struct CurvatureTensor {
    double alpha = 0.0;
    Tensor4 R;  // R(i,j,k,l) = R^l_{ijk}, i.e. R(d_i, d_j) d_k = R^l_{ijk} d_l
    double max_abs = 0.0;
};

// R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//           + Gamma^l_{is} Gamma^s_{jk} - Gamma^l_{js} Gamma^s_{ik},
// with the Christoffel derivatives taken by central differences at `step`.
// Richardson extrapolation (steps h and h/2 combined to an O(h^4) estimate)
// is on by default; plain differences leave ~1e-6 truncation noise on the
// rougher models, right at the tolerance the flatness checks run at.
inline CurvatureTensor curvature_tensor(const ExponentialFamilyModel& model, const Theta& theta,
                                        double alpha, double step = 1e-3,
                                        double condition_cap = 1e12, bool richardson = true) {
    const std::size_t n = model.n;
    const auto gamma = alpha_christoffels(model, theta, alpha, condition_cap);

    auto central = [&](std::size_t i, double h) {
        Theta probe = theta;
        probe[i] = theta[i] + h;
        const auto plus = alpha_christoffels(model, probe, alpha, condition_cap);
        probe[i] = theta[i] - h;
        const auto minus = alpha_christoffels(model, probe, alpha, condition_cap);
        Tensor3 d(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    d(j, k, l) = (plus.mixed(j, k, l) - minus.mixed(j, k, l)) / (2.0 * h);
        return d;
    };

    std::vector<Tensor3> dgamma(n);  // dgamma[i](j,k,l) = d_i Gamma^l_{jk}
    for (std::size_t i = 0; i < n; ++i) {
        Tensor3 coarse = central(i, step);
        if (!richardson) {
            dgamma[i] = std::move(coarse);
            continue;
        }
        Tensor3 fine = central(i, step / 2.0);
        Tensor3 d(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    d(j, k, l) = (4.0 * fine(j, k, l) - coarse(j, k, l)) / 3.0;
        dgamma[i] = std::move(d);
    }

    CurvatureTensor out;
    out.alpha = alpha;
    out.R = Tensor4(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    double acc = dgamma[i](j, k, l) - dgamma[j](i, k, l);
                    for (std::size_t s = 0; s < n; ++s)
                        acc += gamma.mixed(i, s, l) * gamma.mixed(j, k, s) -
                               gamma.mixed(j, s, l) * gamma.mixed(i, k, s);
                    out.R(i, j, k, l) = acc;
                }
    out.max_abs = out.R.max_abs();
    return out;
}

// g-normalized sectional curvature of the coordinate plane (i,j):
// K = g(R(d_i,d_j) d_j, d_i) / (g_ii g_jj - g_ij^2).
inline double sectional_curvature(const ExponentialFamilyModel& model, const Theta& theta,
                                  double alpha, std::size_t i = 0, std::size_t j = 1,
                                  double step = 1e-3, double condition_cap = 1e12) {
    if (model.n < 2) throw std::invalid_argument("sectional curvature needs n >= 2");
    if (i >= model.n || j >= model.n || i == j)
        throw std::invalid_argument("invalid coordinate plane");
    const auto metric = fisher_metric(model, theta);
    const auto curv = curvature_tensor(model, theta, alpha, step, condition_cap);
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    double numerator = 0.0;
    for (std::size_t l = 0; l < model.n; ++l)
        numerator += metric.g(static_cast<Eigen::Index>(l), ii) * curv.R(i, j, j, l);
    const double denom = metric.g(ii, ii) * metric.g(jj, jj) - metric.g(ii, jj) * metric.g(ii, jj);
    return numerator / denom;
}

// max |R^(alpha) - R^(-alpha)| over all components.
inline double pencil_symmetry_report(const ExponentialFamilyModel& model, const Theta& theta,
                                     double alpha, double step = 1e-3,
                                     double condition_cap = 1e12) {
    const auto plus = curvature_tensor(model, theta, alpha, step, condition_cap);
    const auto minus = curvature_tensor(model, theta, -alpha, step, condition_cap);
    return max_abs_diff(plus.R, minus.R);
}

}  // namespace statgeo
