#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "statgeo/intlinalg.hpp"
#include "statgeo/rng.hpp"

namespace statgeo {

// Discrete exponential family p(omega_j; theta) proportional to
// p0_j * exp(sum_i theta_i Q[i][j]). Q holds the sufficient statistics,
// one row per statistic, one column per sample point.
struct ExponentialFamilyModel {
    std::string name;
    std::size_t m = 0;  // sample points
    std::size_t n = 0;  // statistics / canonical parameters
    std::vector<std::vector<long long>> Q;  // n x m
    std::vector<double> base_measure;       // m entries, all > 0
    int rank = 0;                           // exact rank of Q over the integers
    bool rank_deficient = false;
};

using Theta = std::vector<double>;

inline void check_theta(const ExponentialFamilyModel& model, const Theta& theta) {
    if (theta.size() != model.n)
        throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                    " entries, model expects " + std::to_string(model.n));
    for (double t : theta)
        if (!std::isfinite(t)) throw std::invalid_argument("theta entry not finite");
}

inline ExponentialFamilyModel make_model(std::string name,
                                         std::vector<std::vector<long long>> Q,
                                         std::vector<double> base_measure = {}) {
    ExponentialFamilyModel model;
    model.name = std::move(name);
    model.n = Q.size();
    if (model.n < 1) throw std::invalid_argument("model needs at least one statistic (n >= 1)");
    model.m = Q[0].size();
    if (model.m < 2) throw std::invalid_argument("model needs at least two sample points (m >= 2)");
    for (const auto& row : Q)
        if (row.size() != model.m) throw std::invalid_argument("ragged Q matrix");
    model.Q = std::move(Q);

    if (base_measure.empty()) base_measure.assign(model.m, 1.0);
    if (base_measure.size() != model.m)
        throw std::invalid_argument("base_measure length does not match m");
    for (double b : base_measure)
        if (!(b > 0.0) || !std::isfinite(b))
            throw std::invalid_argument("non-positive base measure");
    model.base_measure = std::move(base_measure);

    IntMat qi(model.n, IntVec(model.m));
    for (std::size_t i = 0; i < model.n; ++i)
        for (std::size_t j = 0; j < model.m; ++j) qi[i][j] = model.Q[i][j];
    model.rank = integer_rank(qi);
    model.rank_deficient = model.rank < static_cast<int>(model.n);
    return model;
}

// Model file schema: a JSON object with exactly the keys
//   name (string), m (int), n (int), Q (n arrays of m integers),
//   base_measure (optional, m positive numbers).
// Anything else is rejected.
inline ExponentialFamilyModel load_model(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed model file: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("model file must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "name" && key != "m" && key != "n" && key != "Q" && key != "base_measure")
            throw std::invalid_argument("unknown key in model file: " + key);
    }
    for (const char* key : {"name", "m", "n", "Q"})
        if (!doc.contains(key))
            throw std::invalid_argument(std::string("model file missing key: ") + key);
    if (!doc["name"].is_string()) throw std::invalid_argument("name must be a string");
    if (!doc["m"].is_number_integer() || !doc["n"].is_number_integer())
        throw std::invalid_argument("m and n must be integers");
    const auto m = doc["m"].get<long long>();
    const auto n = doc["n"].get<long long>();
    if (m < 2) throw std::invalid_argument("m must be at least 2");
    if (n < 1) throw std::invalid_argument("n must be at least 1");

    if (!doc["Q"].is_array() || doc["Q"].size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("Q must be an array of n rows");
    std::vector<std::vector<long long>> Q;
    for (const auto& row : doc["Q"]) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(m))
            throw std::invalid_argument("each Q row must have m entries");
        std::vector<long long> r;
        for (const auto& entry : row) {
            if (!entry.is_number_integer())
                throw std::invalid_argument("non-integer Q entry");
            r.push_back(entry.get<long long>());
        }
        Q.push_back(std::move(r));
    }

    std::vector<double> base;
    if (doc.contains("base_measure")) {
        if (!doc["base_measure"].is_array() ||
            doc["base_measure"].size() != static_cast<std::size_t>(m))
            throw std::invalid_argument("base_measure must have m entries");
        for (const auto& entry : doc["base_measure"]) {
            if (!entry.is_number()) throw std::invalid_argument("base_measure entry must be a number");
            base.push_back(entry.get<double>());
        }
    }
    return make_model(doc["name"].get<std::string>(), std::move(Q), std::move(base));
}

inline ExponentialFamilyModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model(buf.str());
}

// psi(theta) = log sum_j p0_j exp(<theta, Q col j>), evaluated with a max
// shift so exponents stay bounded.
inline double log_partition(const ExponentialFamilyModel& model, const Theta& theta) {
    check_theta(model, theta);
    std::vector<double> exponent(model.m);
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < model.m; ++j) {
        double e = std::log(model.base_measure[j]);
        for (std::size_t i = 0; i < model.n; ++i)
            e += theta[i] * static_cast<double>(model.Q[i][j]);
        exponent[j] = e;
        shift = std::max(shift, e);
    }
    double acc = 0.0;
    for (double e : exponent) acc += std::exp(e - shift);
    return shift + std::log(acc);
}

inline std::vector<double> probabilities(const ExponentialFamilyModel& model,
                                         const Theta& theta) {
    const double psi = log_partition(model, theta);
    std::vector<double> p(model.m);
    for (std::size_t j = 0; j < model.m; ++j) {
        double e = std::log(model.base_measure[j]) - psi;
        for (std::size_t i = 0; i < model.n; ++i)
            e += theta[i] * static_cast<double>(model.Q[i][j]);
        p[j] = std::exp(e);
    }
    return p;
}

struct MeanParameters {
    std::vector<double> mu;
    double fd_residual;  // max_i |mu_i - central difference of psi|
};

inline MeanParameters mean_parameters(const ExponentialFamilyModel& model, const Theta& theta,
                                      double fd_step = 1e-4) {
    const auto p = probabilities(model, theta);
    MeanParameters out;
    out.mu.assign(model.n, 0.0);
    for (std::size_t i = 0; i < model.n; ++i)
        for (std::size_t j = 0; j < model.m; ++j)
            out.mu[i] += p[j] * static_cast<double>(model.Q[i][j]);

    double residual = 0.0;
    Theta probe = theta;
    for (std::size_t i = 0; i < model.n; ++i) {
        probe[i] = theta[i] + fd_step;
        const double plus = log_partition(model, probe);
        probe[i] = theta[i] - fd_step;
        const double minus = log_partition(model, probe);
        probe[i] = theta[i];
        residual = std::max(residual, std::abs(out.mu[i] - (plus - minus) / (2.0 * fd_step)));
    }
    out.fd_residual = residual;
    return out;
}

// tau_j = prod_i t_i^{Q[i][j]} with t_i = exp(theta_i); evaluated as
// exp(<theta, Q col j>) so large exponents do not round through pow.
inline std::vector<double> monomial_parametrization(const ExponentialFamilyModel& model,
                                                    const Theta& theta) {
    check_theta(model, theta);
    std::vector<double> tau(model.m);
    for (std::size_t j = 0; j < model.m; ++j) {
        double e = 0.0;
        for (std::size_t i = 0; i < model.n; ++i)
            e += theta[i] * static_cast<double>(model.Q[i][j]);
        tau[j] = std::exp(e);
    }
    return tau;
}

// Small random model with entries in {-2,...,2}; used for fixtures and
// property tests.
inline ExponentialFamilyModel make_random_model(const std::string& name, std::size_t n,
                                                std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<long long>> Q(n, std::vector<long long>(m));
    for (auto& row : Q)
        for (auto& e : row) e = rng.uniform_int(-2, 2);
    return make_model(name, std::move(Q));
}

}  // namespace statgeo
