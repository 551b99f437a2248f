#pragma once

#include <vector>

#include "scalar.hpp"

namespace orbiqrr {

/// Dense row-major matrix of exact scalars.
using Matrix = std::vector<std::vector<Scalar>>;

inline Matrix zero_matrix(std::size_t n, std::size_t m) { return Matrix(n, std::vector<Scalar>(m)); }
inline Matrix zero_matrix(std::size_t n) { return zero_matrix(n, n); }

inline Matrix identity_matrix(std::size_t n) {
    Matrix m = zero_matrix(n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = Scalar(1);
    return m;
}

inline Matrix transpose(const Matrix& a) {
    if (a.empty()) return {};
    Matrix t = zero_matrix(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.empty() || b.empty()) return {};
    if (a[0].size() != b.size()) throw BasisMismatch("matrix dimension mismatch");
    Matrix c = zero_matrix(a.size(), b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < b[0].size(); ++j)
                if (!b[k][j].is_zero()) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

inline Matrix operator+(Matrix a, const Matrix& b) {
    if (a.size() != b.size()) throw BasisMismatch("matrix dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
    return a;
}

inline Matrix operator-(Matrix a, const Matrix& b) {
    if (a.size() != b.size()) throw BasisMismatch("matrix dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= b[i][j];
    return a;
}

inline Matrix scaled(Matrix a, const Scalar& s) {
    for (auto& row : a)
        for (auto& x : row) x *= s;
    return a;
}

inline bool is_zero(const Matrix& a) {
    for (auto& row : a)
        for (auto& x : row)
            if (!x.is_zero()) return false;
    return true;
}

/// Gauss-Jordan inverse; throws NonInvertible for singular input.
inline Matrix inverse(Matrix a) {
    const std::size_t n = a.size();
    Matrix inv = identity_matrix(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw NonInvertible("singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Scalar p = a[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] *= p;
            inv[col][j] *= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col].is_zero()) continue;
            Scalar f = a[i][col];
            for (std::size_t j = 0; j < n; ++j) {
                if (!a[col][j].is_zero()) a[i][j] -= f * a[col][j];
                if (!inv[col][j].is_zero()) inv[i][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

} // namespace orbiqrr
