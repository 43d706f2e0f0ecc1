// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdms/errors.hpp"
#include "pdms/field.hpp"

namespace pdms {

class ColumnVector {
public:
    ColumnVector(std::size_t len, FieldModulus modulus)
        : modulus_(modulus), data_(len, 0) {}

    ColumnVector(FieldModulus modulus, std::vector<std::uint32_t> values)
        : modulus_(modulus), data_(std::move(values)) {
        for (auto v : data_)
            if (!modulus_.canonical(v))
                throw FieldError("vector entry " + std::to_string(v) + " not canonical mod " +
                                 std::to_string(modulus_.value()));
    }

    std::size_t size() const noexcept { return data_.size(); }
    FieldModulus modulus() const noexcept { return modulus_; }

    std::uint32_t at(std::size_t i) const {
        if (i >= data_.size())
            throw DimensionError("vector index out of range");
        return data_[i];
    }

    void set(std::size_t i, std::uint32_t v) {
        if (i >= data_.size())
            throw DimensionError("vector index out of range");
        if (!modulus_.canonical(v))
            throw FieldError("non-canonical vector entry");
        data_[i] = v;
    }

    std::span<const std::uint32_t> values() const noexcept { return data_; }

    friend bool operator==(const ColumnVector&, const ColumnVector&) = default;

private:
    FieldModulus modulus_;
    std::vector<std::uint32_t> data_;
};

// Dense row-major matrix of canonical residues mod q.
class FqMatrix {
public:
    FqMatrix(std::size_t rows, std::size_t cols, FieldModulus modulus)
        : rows_(rows), cols_(cols), modulus_(modulus), data_(rows * cols, 0) {}

    static FqMatrix identity(std::size_t n, FieldModulus modulus) {
        FqMatrix m(n, n, modulus);
        for (std::size_t i = 0; i < n; ++i)
            m.data_[i * n + i] = 1 % modulus.value();
        return m;
    }

    static FqMatrix from_rows(FieldModulus modulus,
                              const std::vector<std::vector<std::uint32_t>>& rows) {
        if (rows.empty())
            return FqMatrix(0, 0, modulus);
        FqMatrix m(rows.size(), rows.front().size(), modulus);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols_)
                throw DimensionError("ragged row lengths");
            for (std::size_t c = 0; c < m.cols_; ++c)
                m.set(r, c, rows[r][c]);
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    FieldModulus modulus() const noexcept { return modulus_; }

    std::uint32_t at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            throw DimensionError("matrix index out of range");
        return data_[r * cols_ + c];
    }

    void set(std::size_t r, std::size_t c, std::uint32_t v) {
        if (r >= rows_ || c >= cols_)
            throw DimensionError("matrix index out of range");
        if (!modulus_.canonical(v))
            throw FieldError("entry " + std::to_string(v) + " not a canonical residue mod " +
                             std::to_string(modulus_.value()));
        data_[r * cols_ + c] = v;
    }

    std::span<const std::uint32_t> row(std::size_t r) const {
        if (r >= rows_)
            throw DimensionError("row index out of range");
        return {data_.data() + r * cols_, cols_};
    }

    std::span<const std::uint32_t> values() const noexcept { return data_; }

    // Elementary row operations (used by the elimination routines).
    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap(data_[a * cols_ + c], data_[b * cols_ + c]);
    }

    void scale_row(std::size_t r, std::uint32_t factor) {
        for (std::size_t c = 0; c < cols_; ++c)
            data_[r * cols_ + c] = modulus_.mul(data_[r * cols_ + c], factor);
    }

    // row[target] += factor * row[source]
    void add_scaled_row(std::size_t target, std::size_t source, std::uint32_t factor) {
        for (std::size_t c = 0; c < cols_; ++c)
            data_[target * cols_ + c] = modulus_.add(
                data_[target * cols_ + c], modulus_.mul(factor, data_[source * cols_ + c]));
    }

    friend bool operator==(const FqMatrix&, const FqMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    FieldModulus modulus_;
    std::vector<std::uint32_t> data_;
};

namespace detail {
inline void require_same_modulus(const FqMatrix& a, const FqMatrix& b) {
    if (a.modulus() != b.modulus())
        throw FieldError("modulus mismatch between matrices");
}
} // namespace detail

inline FqMatrix mat_mul(const FqMatrix& a, const FqMatrix& b) {
    detail::require_same_modulus(a, b);
    if (a.cols() != b.rows())
        throw DimensionError("mat_mul: inner dimensions disagree (" + std::to_string(a.cols()) +
                             " vs " + std::to_string(b.rows()) + ")");
    const FieldModulus m = a.modulus();
    FqMatrix out(a.rows(), b.cols(), m);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t t = 0; t < a.cols(); ++t) {
            const std::uint32_t f = a.at(i, t);
            if (f == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out.set(i, j, m.add(out.at(i, j), m.mul(f, b.at(t, j))));
        }
    }
    return out;
}

// x (1 x rows) times A -> 1 x cols, as a ColumnVector of length cols.
inline ColumnVector vec_mat_mul(std::span<const std::uint32_t> x, const FqMatrix& a) {
    if (x.size() != a.rows())
        throw DimensionError("vec_mat_mul: vector length does not match matrix rows");
    const FieldModulus m = a.modulus();
    ColumnVector out(a.cols(), m);
    for (std::size_t t = 0; t < a.rows(); ++t) {
        if (x[t] == 0)
            continue;
        if (!m.canonical(x[t]))
            throw FieldError("vec_mat_mul: non-canonical coordinate");
        for (std::size_t j = 0; j < a.cols(); ++j)
            out.set(j, m.add(out.at(j), m.mul(x[t], a.at(t, j))));
    }
    return out;
}

inline std::uint32_t dot(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y,
                         const FieldModulus& m) {
    if (x.size() != y.size())
        throw DimensionError("dot: length mismatch");
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc = m.add(acc, m.mul(x[i], y[i]));
    return acc;
}

// Gauss-Jordan inverse; pivots on the first nonzero entry of each column.
inline FqMatrix invert(const FqMatrix& a) {
    if (a.rows() != a.cols())
        throw DimensionError("invert: matrix is not square");
    const std::size_t n = a.rows();
    const FieldModulus m = a.modulus();
    FqMatrix work = a;
    FqMatrix out = FqMatrix::identity(n, m);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && work.at(piv, col) == 0)
            ++piv;
        if (piv == n)
            throw SingularMatrixError(
                "invert: singular matrix (no pivot in column " + std::to_string(col + 1) + ")", col);
        if (piv != col) {
            work.swap_rows(piv, col);
            out.swap_rows(piv, col);
        }
        const std::uint32_t scale = m.inv(work.at(col, col));
        work.scale_row(col, scale);
        out.scale_row(col, scale);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const std::uint32_t f = work.at(r, col);
            if (f == 0)
                continue;
            work.add_scaled_row(r, col, m.neg(f));
            out.add_scaled_row(r, col, m.neg(f));
        }
    }
    return out;
}

inline std::size_t rank(const FqMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0)
        return 0;
    FqMatrix w = a;
    const FieldModulus m = a.modulus();
    std::size_t rk = 0;
    for (std::size_t col = 0; col < a.cols() && rk < a.rows(); ++col) {
        std::size_t piv = rk;
        while (piv < a.rows() && w.at(piv, col) == 0)
            ++piv;
        if (piv == a.rows())
            continue;
        w.swap_rows(piv, rk);
        w.scale_row(rk, m.inv(w.at(rk, col)));
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == rk)
                continue;
            const std::uint32_t f = w.at(r, col);
            if (f != 0)
                w.add_scaled_row(r, rk, m.neg(f));
        }
        ++rk;
    }
    return rk;
}

// One solution of Ax = b with free variables fixed to 0, or nullopt when
// rank(A) < rank([A | b]).
inline std::optional<ColumnVector> solve(const FqMatrix& a, const ColumnVector& b) {
    if (a.rows() != b.size())
        throw DimensionError("solve: rhs length does not match matrix rows");
    if (a.modulus() != b.modulus())
        throw FieldError("solve: modulus mismatch");
    const FieldModulus m = a.modulus();
    FqMatrix w(a.rows(), a.cols() + 1, m);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            w.set(r, c, a.at(r, c));
        w.set(r, a.cols(), b.at(r));
    }
    std::vector<std::pair<std::size_t, std::size_t>> pivots; // (row, col)
    std::size_t rk = 0;
    for (std::size_t col = 0; col < a.cols() && rk < a.rows(); ++col) {
        std::size_t piv = rk;
        while (piv < a.rows() && w.at(piv, col) == 0)
            ++piv;
        if (piv == a.rows())
            continue;
        w.swap_rows(piv, rk);
        w.scale_row(rk, m.inv(w.at(rk, col)));
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == rk)
                continue;
            const std::uint32_t f = w.at(r, col);
            if (f != 0)
                w.add_scaled_row(r, rk, m.neg(f));
        }
        pivots.emplace_back(rk, col);
        ++rk;
    }
    for (std::size_t r = rk; r < a.rows(); ++r)
        if (w.at(r, a.cols()) != 0)
            return std::nullopt;
    ColumnVector x(a.cols(), m);
    for (auto [row, col] : pivots)
        x.set(col, w.at(row, a.cols()));
    return x;
}

// Minor selected by strictly increasing 0-based index sets.
inline FqMatrix submatrix(const FqMatrix& a, std::span<const std::size_t> row_idx,
                          std::span<const std::size_t> col_idx) {
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        if (row_idx[i] >= a.rows())
            throw DimensionError("submatrix: row index out of range");
        if (i > 0 && row_idx[i] <= row_idx[i - 1])
            throw DimensionError("submatrix: row indices must be strictly increasing");
    }
    for (std::size_t i = 0; i < col_idx.size(); ++i) {
        if (col_idx[i] >= a.cols())
            throw DimensionError("submatrix: column index out of range");
        if (i > 0 && col_idx[i] <= col_idx[i - 1])
            throw DimensionError("submatrix: column indices must be strictly increasing");
    }
    FqMatrix out(row_idx.size(), col_idx.size(), a.modulus());
    for (std::size_t r = 0; r < row_idx.size(); ++r)
        for (std::size_t c = 0; c < col_idx.size(); ++c)
            out.set(r, c, a.at(row_idx[r], col_idx[c]));
    return out;
}

inline FqMatrix submatrix(const FqMatrix& a, std::initializer_list<std::size_t> rows,
                          std::initializer_list<std::size_t> cols) {
    std::vector<std::size_t> r(rows), c(cols);
    return submatrix(a, std::span<const std::size_t>(r), std::span<const std::size_t>(c));
}

// Determinant via row reduction with swap-sign tracking.
inline FieldElement determinant(const FqMatrix& a) {
    if (a.rows() != a.cols())
        throw DimensionError("determinant: matrix is not square");
    const FieldModulus m = a.modulus();
    FqMatrix w = a;
    const std::size_t n = a.rows();
    std::uint32_t det = 1 % m.value();
    bool negate = false;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && w.at(piv, col) == 0)
            ++piv;
        if (piv == n)
            return {0, m.value()};
        if (piv != col) {
            w.swap_rows(piv, col);
            negate = !negate;
        }
        det = m.mul(det, w.at(col, col));
        const std::uint32_t pivot_inv = m.inv(w.at(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const std::uint32_t f = m.mul(w.at(r, col), pivot_inv);
            if (f != 0)
                w.add_scaled_row(r, col, m.neg(f));
        }
    }
    return {negate ? m.neg(det) : det, m.value()};
}

} // namespace pdms
