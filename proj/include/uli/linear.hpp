#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "uli/error.hpp"
#include "uli/rational.hpp"

namespace uli {

using RationalMatrix = std::vector<std::vector<Rational>>;

struct InverseResult {
    Rational determinant;
    RationalMatrix inverse;
};

namespace detail {

using IntegerMatrix = std::vector<std::vector<Integer>>;

/// Scales each row by the lcm of its denominators. Returns the integer
/// matrix and the row scale factors.
inline std::pair<IntegerMatrix, std::vector<Integer>> integer_rows(const RationalMatrix& a)
{
    IntegerMatrix out(a.size());
    std::vector<Integer> scale(a.size(), 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (const auto& v : a[i])
            scale[i] = lcm(scale[i], denominator(v));
        out[i].reserve(a[i].size());
        for (const auto& v : a[i])
            out[i].push_back(numerator(v) * (scale[i] / denominator(v)));
    }
    return {std::move(out), std::move(scale)};
}

inline void require_square(const RationalMatrix& a)
{
    for (const auto& row : a)
        require(row.size() == a.size(), ErrorKind::InvalidArgument, "matrix is not square");
}

} // namespace detail

/// Determinant by Bareiss elimination on the row-scaled integer matrix.
/// Pivot: first row (top to bottom) with a non-zero entry in the column.
inline Rational determinant(const RationalMatrix& a)
{
    detail::require_square(a);
    const std::size_t n = a.size();
    if (n == 0)
        return 1;
    auto [m, scale] = detail::integer_rows(a);
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m[pivot][k] == 0)
            ++pivot;
        if (pivot == n)
            return 0;
        if (pivot != k) {
            std::swap(m[pivot], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Integer total_scale = 1;
    for (const auto& s : scale)
        total_scale *= s;
    return Rational(sign * m[n - 1][n - 1], total_scale);
}

/// Exact inverse by fraction-free Gauss-Jordan elimination on [M | I],
/// where M is the row-scaled integer matrix. Throws Singular when det = 0.
inline InverseResult invert(const RationalMatrix& a)
{
    detail::require_square(a);
    const std::size_t n = a.size();
    auto [m, scale] = detail::integer_rows(a);
    for (std::size_t i = 0; i < n; ++i) {
        m[i].resize(2 * n, 0);
        m[i][n + i] = 1;
    }
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m[pivot][k] == 0)
            ++pivot;
        if (pivot == n)
            throw Error(ErrorKind::Singular, "matrix is singular");
        if (pivot != k) {
            std::swap(m[pivot], m[k]);
            sign = -sign;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k)
                continue;
            const Integer factor = m[i][k];
            for (std::size_t j = 0; j < 2 * n; ++j)
                m[i][j] = (m[k][k] * m[i][j] - factor * m[k][j]) / prev;
        }
        prev = m[k][k];
    }
    // Left block is now d * I with d = sign * det(M); right block is d * M^{-1}.
    InverseResult out;
    Integer total_scale = 1;
    for (const auto& s : scale)
        total_scale *= s;
    out.determinant = Rational(sign * prev, total_scale);
    out.inverse.assign(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            // A^{-1} = M^{-1} diag(scale)
            out.inverse[i][j] = Rational(m[i][n + j] * scale[j], m[i][i]);
    return out;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b)
{
    const std::size_t inner = b.size();
    RationalMatrix out(a.size(), std::vector<Rational>(inner == 0 ? 0 : b[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        require(a[i].size() == inner, ErrorKind::InvalidArgument, "matrix dimensions do not match");
        for (std::size_t k = 0; k < inner; ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < out[i].size(); ++j)
                    out[i][j] += a[i][k] * b[k][j];
    }
    return out;
}

} // namespace uli
