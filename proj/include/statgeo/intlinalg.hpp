#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace statgeo {

// Exact integer linear algebra on small dense matrices. Everything here is
// arbitrary precision: no intermediate result can overflow, whatever the
// input entries are.

using BigInt = boost::multiprecision::cpp_int;
using IntVec = std::vector<BigInt>;
using IntMat = std::vector<IntVec>;

namespace detail {

inline bool row_is_zero(const IntVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

// Quotient rounded toward the nearest integer; keeps pivots shrinking fast
// during gcd-style elimination.
inline BigInt rounded_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    BigInt r = a - q * b;
    if (r != 0) {
        BigInt babs = b < 0 ? BigInt(-b) : b;
        BigInt rabs = r < 0 ? BigInt(-r) : r;
        if (2 * rabs > babs) q += (r < 0) == (b < 0) ? 1 : -1;
    }
    return q;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace detail

// Row-style Hermite normal form. Unimodular row operations only, so the
// row lattice is preserved. Pivots are positive, entries above each pivot
// are reduced into [0, pivot), zero rows are dropped. The result is the
// canonical basis of the lattice spanned by the input rows.
inline IntMat hnf_rows(IntMat A) {
    if (A.empty()) return A;
    const std::size_t m = A[0].size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < m && r < A.size(); ++col) {
        // gcd elimination below row r in this column
        while (true) {
            std::size_t piv = A.size();
            for (std::size_t i = r; i < A.size(); ++i) {
                if (A[i][col] == 0) continue;
                if (piv == A.size() ||
                    abs(A[i][col]) < abs(A[piv][col]))
                    piv = i;
            }
            if (piv == A.size()) break;  // column clear
            std::swap(A[r], A[piv]);
            bool cleared = true;
            for (std::size_t i = r + 1; i < A.size(); ++i) {
                if (A[i][col] == 0) continue;
                BigInt q = detail::rounded_div(A[i][col], A[r][col]);
                for (std::size_t k = 0; k < m; ++k) A[i][k] -= q * A[r][k];
                if (A[i][col] != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (A[r][col] == 0) continue;
        if (A[r][col] < 0)
            for (std::size_t k = 0; k < m; ++k) A[r][k] = -A[r][k];
        for (std::size_t i = 0; i < r; ++i) {
            if (A[i][col] == 0) continue;
            BigInt q = detail::floor_div(A[i][col], A[r][col]);
            if (q == 0) continue;
            for (std::size_t k = 0; k < m; ++k) A[i][k] -= q * A[r][k];
        }
        ++r;
    }
    A.erase(std::remove_if(A.begin(), A.end(), detail::row_is_zero), A.end());
    return A;
}

inline int integer_rank(const IntMat& A) {
    return static_cast<int>(hnf_rows(A).size());
}

// Basis of { u : A u = 0 } as a sublattice of Z^m. Columns of A are reduced
// by unimodular column operations mirrored into an identity matrix U; the
// U-columns below the zero columns of the reduced A span the kernel. The
// basis is then canonicalized through hnf_rows and sorted.
inline IntMat kernel_lattice_basis(const IntMat& A_in) {
    if (A_in.empty()) return {};
    const std::size_t rows = A_in.size();
    const std::size_t m = A_in[0].size();
    IntMat A = A_in;
    IntMat U(m, IntVec(m, 0));
    for (std::size_t j = 0; j < m; ++j) U[j][j] = 1;

    auto col_op = [&](std::size_t dst, std::size_t src, const BigInt& q) {
        for (std::size_t i = 0; i < rows; ++i) A[i][dst] -= q * A[i][src];
        for (std::size_t i = 0; i < m; ++i) U[i][dst] -= q * U[i][src];
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < rows; ++i) std::swap(A[i][a], A[i][b]);
        for (std::size_t i = 0; i < m; ++i) std::swap(U[i][a], U[i][b]);
    };

    std::size_t pivcol = 0;
    for (std::size_t row = 0; row < rows && pivcol < m; ++row) {
        while (true) {
            std::size_t piv = m;
            for (std::size_t j = pivcol; j < m; ++j) {
                if (A[row][j] == 0) continue;
                if (piv == m || abs(A[row][j]) < abs(A[row][piv])) piv = j;
            }
            if (piv == m) break;
            col_swap(pivcol, piv);
            bool cleared = true;
            for (std::size_t j = pivcol + 1; j < m; ++j) {
                if (A[row][j] == 0) continue;
                col_op(j, pivcol, detail::rounded_div(A[row][j], A[row][pivcol]));
                if (A[row][j] != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (A[row][pivcol] != 0) ++pivcol;
    }

    IntMat basis;
    for (std::size_t j = pivcol; j < m; ++j) {
        IntVec u(m);
        for (std::size_t i = 0; i < m; ++i) u[i] = U[i][j];
        basis.push_back(std::move(u));
    }
    basis = hnf_rows(std::move(basis));
    std::sort(basis.begin(), basis.end());
    return basis;
}

// Membership of u in the lattice spanned by an echelon (hnf_rows) basis:
// peel off one basis vector per pivot with exact division, accept iff the
// remainder is 0. Rows are visited in ascending pivot-column order so the
// peeling is a proper back-substitution whatever order the basis is stored
// in.
inline bool lattice_member(const IntMat& basis, IntVec u) {
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (lead col, row)
    for (std::size_t r = 0; r < basis.size(); ++r) {
        for (std::size_t k = 0; k < basis[r].size(); ++k)
            if (basis[r][k] != 0) {
                order.emplace_back(k, r);
                break;
            }
    }
    std::sort(order.begin(), order.end());
    for (auto [lead, r] : order) {
        const IntVec& row = basis[r];
        if (u[lead] == 0) continue;
        if (u[lead] % row[lead] != 0) return false;
        BigInt c = u[lead] / row[lead];
        for (std::size_t k = 0; k < row.size(); ++k) u[k] -= c * row[k];
    }
    return detail::row_is_zero(u);
}

inline IntVec mat_vec(const IntMat& A, const IntVec& u) {
    IntVec r(A.size(), 0);
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) r[i] += A[i][j] * u[j];
    return r;
}

inline bool is_zero(const IntVec& v) { return detail::row_is_zero(v); }

}  // namespace statgeo
