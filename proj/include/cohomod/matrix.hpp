#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cohomod/fp.hpp"

namespace cohomod {

/// Dense matrix over F_p, row-major. Entries are canonical residues.
/// Values are immutable in spirit: operations return new matrices, and
/// elimination uses a fixed deterministic pivot rule (first nonzero row in
/// column order) so every reduced form is reproducible bit for bit.
struct FpMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint32_t p = 2;
    std::vector<std::uint32_t> a;  // rows*cols entries

    FpMatrix() = default;
    FpMatrix(std::size_t r, std::size_t c, std::uint32_t mod)
        : rows(r), cols(c), p(mod), a(r * c, 0) {}

    std::uint32_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static FpMatrix identity(std::size_t n, std::uint32_t mod) {
        FpMatrix m(n, n, mod);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const FpMatrix& o) const {
        return rows == o.rows && cols == o.cols && p == o.p && a == o.a;
    }
};

using FpVector = std::vector<std::uint32_t>;

inline FpMatrix mul(const FpMatrix& x, const FpMatrix& y) {
    if (x.cols != y.rows || x.p != y.p)
        throw std::invalid_argument("FpMatrix mul: shape or modulus mismatch");
    PrimeField f(x.p);
    FpMatrix z(x.rows, y.cols, x.p);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            std::uint32_t v = x.at(i, k);
            if (!v) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                z.at(i, j) = f.add(z.at(i, j), f.mul(v, y.at(k, j)));
        }
    return z;
}

/// m * v as a column vector.
inline FpVector mul_vec(const FpMatrix& m, const FpVector& v) {
    if (m.cols != v.size())
        throw std::invalid_argument("FpMatrix mul_vec: dimension mismatch");
    PrimeField f(m.p);
    FpVector out(m.rows, 0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < m.cols; ++j)
            acc += static_cast<std::uint64_t>(m.at(i, j)) * v[j];
        out[i] = static_cast<std::uint32_t>(acc % m.p);
    }
    return out;
}

/// v^T * m as a row vector.
inline FpVector vec_mul(const FpVector& v, const FpMatrix& m) {
    if (m.rows != v.size())
        throw std::invalid_argument("FpMatrix vec_mul: dimension mismatch");
    PrimeField f(m.p);
    FpVector out(m.cols, 0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::uint32_t s = v[i];
        if (!s) continue;
        for (std::size_t j = 0; j < m.cols; ++j)
            out[j] = f.add(out[j], f.mul(s, m.at(i, j)));
    }
    return out;
}

inline FpMatrix transpose(const FpMatrix& m) {
    FpMatrix t(m.cols, m.rows, m.p);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

struct RrefResult {
    FpMatrix reduced;
    std::vector<std::size_t> pivots;  // strictly increasing column indices
    std::size_t rank = 0;
};

/// Unique reduced row-echelon form. Pivot rule: for each column in order,
/// the first unprocessed row with a nonzero entry.
inline RrefResult rref(FpMatrix m) {
    PrimeField f(m.p);
    RrefResult res;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols; ++j)
                std::swap(m.at(sel, j), m.at(row, j));
        std::uint32_t ipiv = f.inv(m.at(row, col));
        for (std::size_t j = col; j < m.cols; ++j)
            m.at(row, j) = f.mul(m.at(row, j), ipiv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            std::uint32_t v = m.at(i, col);
            if (!v) continue;
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(v, m.at(row, j)));
        }
        res.pivots.push_back(col);
        ++row;
    }
    res.rank = res.pivots.size();
    res.reduced = std::move(m);
    return res;
}

inline std::size_t rank(const FpMatrix& m) { return rref(m).rank; }

/// Canonical basis of the right null space {v : m v = 0}, one row per basis
/// vector, in increasing order of free column. Each basis vector has a 1 in
/// its free column and zeros in the other free columns.
inline FpMatrix kernel_basis(const FpMatrix& m) {
    PrimeField f(m.p);
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    std::vector<std::size_t> pivot_row(m.cols, 0);
    for (std::size_t k = 0; k < r.pivots.size(); ++k) {
        is_pivot[r.pivots[k]] = true;
        pivot_row[r.pivots[k]] = k;
    }
    FpMatrix basis(m.cols - r.rank, m.cols, m.p);
    std::size_t out = 0;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        basis.at(out, free) = 1;
        for (std::size_t col = 0; col < free; ++col)
            if (is_pivot[col])
                basis.at(out, col) = f.neg(r.reduced.at(pivot_row[col], free));
        ++out;
    }
    return basis;
}

/// Kernel basis together with the free-column indices. Row j of the basis
/// has a 1 in free_cols[j] and 0 in every other free column, so coordinates
/// of a vector lying in the kernel can be read off at the free columns.
struct KernelInfo {
    FpMatrix basis;
    std::vector<std::size_t> free_cols;
};

inline KernelInfo kernel_with_info(const FpMatrix& m) {
    PrimeField f(m.p);
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    std::vector<std::size_t> pivot_row(m.cols, 0);
    for (std::size_t k = 0; k < r.pivots.size(); ++k) {
        is_pivot[r.pivots[k]] = true;
        pivot_row[r.pivots[k]] = k;
    }
    KernelInfo info;
    info.basis = FpMatrix(m.cols - r.rank, m.cols, m.p);
    std::size_t out = 0;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        info.free_cols.push_back(free);
        info.basis.at(out, free) = 1;
        for (std::size_t col = 0; col < free; ++col)
            if (is_pivot[col])
                info.basis.at(out, col) =
                    f.neg(r.reduced.at(pivot_row[col], free));
        ++out;
    }
    return info;
}

/// Reusable elimination of a fixed coefficient matrix: factor once, then
/// solve m x = rhs for many right-hand sides. Also exposes the kernel.
class RrefSolver {
public:
    explicit RrefSolver(const FpMatrix& m) : m_cols_(m.cols), p_(m.p) {
        // Reduce [m | I]; the right block records the row operations.
        FpMatrix aug(m.rows, m.cols + m.rows, m.p);
        for (std::size_t i = 0; i < m.rows; ++i) {
            for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
            aug.at(i, m.cols + i) = 1;
        }
        // rref of the augmented matrix, pivoting only within the left block
        PrimeField f(p_);
        std::size_t row = 0;
        for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
            std::size_t sel = row;
            while (sel < m.rows && aug.at(sel, col) == 0) ++sel;
            if (sel == m.rows) continue;
            if (sel != row)
                for (std::size_t j = 0; j < aug.cols; ++j)
                    std::swap(aug.at(sel, j), aug.at(row, j));
            std::uint32_t ipiv = f.inv(aug.at(row, col));
            for (std::size_t j = 0; j < aug.cols; ++j)
                aug.at(row, j) = f.mul(aug.at(row, j), ipiv);
            for (std::size_t i = 0; i < m.rows; ++i) {
                if (i == row) continue;
                std::uint32_t v = aug.at(i, col);
                if (!v) continue;
                for (std::size_t j = 0; j < aug.cols; ++j)
                    aug.at(i, j) = f.sub(aug.at(i, j), f.mul(v, aug.at(row, j)));
            }
            pivots_.push_back(col);
            ++row;
        }
        reduced_ = FpMatrix(m.rows, m.cols, p_);
        ops_ = FpMatrix(m.rows, m.rows, p_);
        for (std::size_t i = 0; i < m.rows; ++i) {
            for (std::size_t j = 0; j < m.cols; ++j)
                reduced_.at(i, j) = aug.at(i, j);
            for (std::size_t j = 0; j < m.rows; ++j)
                ops_.at(i, j) = aug.at(i, m.cols + j);
        }
    }

    std::size_t rank() const { return pivots_.size(); }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// One solution of m x = rhs with free variables set to 0, or absence
    /// when the system is inconsistent.
    std::optional<FpVector> solve(const FpVector& rhs) const {
        if (rhs.size() != ops_.cols)
            throw std::invalid_argument("RrefSolver: rhs dimension mismatch");
        FpVector t = mul_vec(ops_, rhs);
        for (std::size_t i = pivots_.size(); i < t.size(); ++i)
            if (t[i] != 0) return std::nullopt;
        FpVector x(m_cols_, 0);
        for (std::size_t k = 0; k < pivots_.size(); ++k) x[pivots_[k]] = t[k];
        return x;
    }

    FpMatrix kernel() const {
        PrimeField f(p_);
        std::vector<bool> is_pivot(m_cols_, false);
        std::vector<std::size_t> pivot_row(m_cols_, 0);
        for (std::size_t k = 0; k < pivots_.size(); ++k) {
            is_pivot[pivots_[k]] = true;
            pivot_row[pivots_[k]] = k;
        }
        FpMatrix basis(m_cols_ - pivots_.size(), m_cols_, p_);
        std::size_t out = 0;
        for (std::size_t free = 0; free < m_cols_; ++free) {
            if (is_pivot[free]) continue;
            basis.at(out, free) = 1;
            for (std::size_t col = 0; col < free; ++col)
                if (is_pivot[col])
                    basis.at(out, col) =
                        f.neg(reduced_.at(pivot_row[col], free));
            ++out;
        }
        return basis;
    }

private:
    std::size_t m_cols_;
    std::uint32_t p_;
    FpMatrix reduced_;  // rref of the coefficient block
    FpMatrix ops_;      // accumulated row operations
    std::vector<std::size_t> pivots_;
};

inline std::optional<FpVector> solve(const FpMatrix& m, const FpVector& rhs) {
    if (rhs.size() != m.rows)
        throw std::invalid_argument("solve: rhs dimension mismatch");
    return RrefSolver(m).solve(rhs);
}

}  // namespace cohomod
