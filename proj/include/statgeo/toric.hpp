#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "statgeo/intlinalg.hpp"
#include "statgeo/model.hpp"

namespace statgeo {

// Design matrix with the constant statistic q0 = 1 prepended. The ones row
// is what makes kernel binomials independent of the normalization.
struct ExtendedMatrix {
    std::size_t rows = 0;  // n + 1
    std::size_t cols = 0;  // m
    std::vector<std::vector<long long>> Qt;
};

inline ExtendedMatrix extended_matrix(const ExponentialFamilyModel& model) {
    ExtendedMatrix out;
    out.rows = model.n + 1;
    out.cols = model.m;
    out.Qt.assign(out.rows, std::vector<long long>(out.cols));
    for (std::size_t j = 0; j < model.m; ++j) out.Qt[0][j] = 1;
    for (std::size_t i = 0; i < model.n; ++i) out.Qt[i + 1] = model.Q[i];
    return out;
}

inline IntMat to_bigint(const std::vector<std::vector<long long>>& M) {
    IntMat out(M.size());
    for (std::size_t i = 0; i < M.size(); ++i)
        out[i].assign(M[i].begin(), M[i].end());
    return out;
}

struct LatticeBasis {
    IntMat basis;     // canonical form: positive leading entries, sorted
    int rank = 0;     // number of basis vectors = m - rank(Qt)
    int qt_rank = 0;  // rank of the extended matrix
};

// Integer kernel { u in Z^m : Qt u = 0 }, computed exactly.
inline LatticeBasis lattice_kernel(const ExtendedMatrix& ext) {
    const IntMat A = to_bigint(ext.Qt);
    LatticeBasis out;
    out.basis = kernel_lattice_basis(A);
    out.rank = static_cast<int>(out.basis.size());
    out.qt_rank = integer_rank(A);
    return out;
}

// One binomial y^{u+} - y^{u-} per kernel vector, u = u+ - u- the unique
// split into nonnegative vectors with disjoint support.
struct BinomialRelation {
    IntVec u_plus;
    IntVec u_minus;
    std::string display;
};

namespace detail {

inline std::string monomial_string(const IntVec& exponents) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        if (exponents[j] == 0) continue;
        if (!first) os << "*";
        os << "y" << (j + 1);
        if (exponents[j] != 1) os << "^" << exponents[j];
        first = false;
    }
    if (first) os << "1";
    return os.str();
}

}  // namespace detail

inline BinomialRelation binomial_from_vector(const IntVec& u) {
    BinomialRelation rel;
    rel.u_plus.assign(u.size(), 0);
    rel.u_minus.assign(u.size(), 0);
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (u[j] > 0)
            rel.u_plus[j] = u[j];
        else if (u[j] < 0)
            rel.u_minus[j] = -u[j];
    }
    rel.display = detail::monomial_string(rel.u_plus) + " - " +
                  detail::monomial_string(rel.u_minus);
    return rel;
}

inline std::vector<BinomialRelation> binomials_from_kernel(const LatticeBasis& basis) {
    std::vector<BinomialRelation> out;
    out.reserve(basis.basis.size());
    for (const auto& u : basis.basis) out.push_back(binomial_from_vector(u));
    return out;
}

// Lattice-basis binomials generate the toric ideal only up to saturation;
// every report carries this caveat verbatim.
inline const char* kLatticeBasisCaveat =
    "lattice-basis binomials generate the toric ideal only up to saturation";

struct VanishingReport {
    double max_residual = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool rescaled_by_base_measure = false;
    std::string note;
};

// For seeded theta draws, evaluates the binomial relations on the model
// probabilities and reports the worst |y^{u+} - y^{u-}|. With a non-uniform
// base measure the exact identity holds for p_j / p0_j, so the monomials
// are rescaled accordingly and the report says so.
inline VanishingReport verify_vanishing(const ExponentialFamilyModel& model,
                                        const std::vector<BinomialRelation>& relations,
                                        std::size_t samples, std::uint64_t seed) {
    VanishingReport report;
    report.samples = samples;
    report.seed = seed;
    report.note = kLatticeBasisCaveat;
    for (double b : model.base_measure)
        if (b != 1.0) report.rescaled_by_base_measure = true;

    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const Theta theta = rng.uniform_vector(model.n, -2.0, 2.0);
        const auto p = probabilities(model, theta);
        for (const auto& rel : relations) {
            double plus = 1.0, minus = 1.0;
            for (std::size_t j = 0; j < model.m; ++j) {
                const double y = report.rescaled_by_base_measure ? p[j] / model.base_measure[j]
                                                                 : p[j];
                if (rel.u_plus[j] != 0)
                    plus *= std::pow(y, static_cast<double>(rel.u_plus[j]));
                if (rel.u_minus[j] != 0)
                    minus *= std::pow(y, static_cast<double>(rel.u_minus[j]));
            }
            report.max_residual = std::max(report.max_residual, std::abs(plus - minus));
        }
    }
    return report;
}

// True iff u is an integer combination of the basis vectors.
inline bool kernel_membership(const LatticeBasis& basis, const IntVec& u) {
    return lattice_member(basis.basis, u);
}

inline bool kernel_membership(const LatticeBasis& basis, const std::vector<long long>& u) {
    return kernel_membership(basis, IntVec(u.begin(), u.end()));
}

}  // namespace statgeo
