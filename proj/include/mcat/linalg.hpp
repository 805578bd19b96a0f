#pragma once

/**
 * @file linalg.hpp
 * @brief Exact linear algebra over Q, F_p (row reduction) and Z (Hermite
 * and Smith normal forms).
 *
 * Matrices are dense row-major vectors of rows. A "span" is always kept in
 * canonical form: reduced row echelon form over a field, row-style Hermite
 * normal form over Z. Canonical forms make subspace equality a plain
 * comparison of rows.
 */

#include "mcat/coeff.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace mcat {

using Vector = std::vector<Scalar>;
using Matrix = std::vector<Vector>;

inline bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x == 0; });
}

inline Vector zero_vector(std::size_t n) { return Vector(n, Scalar(0)); }

inline Matrix identity_matrix(std::size_t n) {
    Matrix m(n, zero_vector(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Matrix transpose(const Matrix& a, std::size_t cols) {
    Matrix t(cols, zero_vector(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = a[i][j];
    return t;
}

/// y = A x, with A given as rows.
inline Vector apply(const Matrix& a, const Vector& x, const CoefficientDomain& dom) {
    Vector y = zero_vector(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Scalar acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] != 0 && a[i][j] != 0) acc += a[i][j] * x[j];
        y[i] = dom.normalize(acc);
    }
    return y;
}

namespace detail {

inline std::vector<Integer> to_integers(const Vector& v) {
    std::vector<Integer> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (denominator(x) != 1)
            throw AlgebraError(ErrorCode::InvalidSpec, "non-integral entry " + x.str() + " over Z");
        out.push_back(numerator(x));
    }
    return out;
}

inline Vector from_integers(const std::vector<Integer>& v) {
    Vector out;
    out.reserve(v.size());
    for (const auto& x : v) out.emplace_back(x);
    return out;
}

using IntMatrix = std::vector<std::vector<Integer>>;

inline IntMatrix to_int_matrix(const Matrix& a) {
    IntMatrix m;
    m.reserve(a.size());
    for (const auto& row : a) m.push_back(to_integers(row));
    return m;
}

inline Matrix from_int_matrix(const IntMatrix& a) {
    Matrix m;
    m.reserve(a.size());
    for (const auto& row : a) m.push_back(from_integers(row));
    return m;
}

inline Integer abs_int(const Integer& x) { return x < 0 ? Integer(-x) : x; }

} // namespace detail

/// Reduced row echelon form over a field. Zero rows are dropped; pivot
/// entries are 1.
inline Matrix rref(Matrix rows, const CoefficientDomain& field) {
    if (rows.empty()) return rows;
    const std::size_t cols = rows.front().size();
    for (auto& row : rows)
        for (auto& x : row) x = field.normalize(x);
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols && lead < rows.size(); ++c) {
        std::size_t pivot = lead;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[lead]);
        const Scalar inv = field.inverse(rows[lead][c]);
        for (auto& x : rows[lead]) x = field.mul(x, inv);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == lead || rows[r][c] == 0) continue;
            const Scalar factor = rows[r][c];
            for (std::size_t j = 0; j < cols; ++j)
                if (rows[lead][j] != 0) rows[r][j] = field.sub(rows[r][j], field.mul(factor, rows[lead][j]));
        }
        ++lead;
    }
    rows.resize(lead);
    return rows;
}

/// Row-style Hermite normal form of the lattice spanned by the rows of
/// an integer matrix: upper echelon, positive pivots, entries above each
/// pivot reduced into [0, pivot). Zero rows are dropped.
inline Matrix hermite_normal_form(const Matrix& rows_in) {
    if (rows_in.empty()) return {};
    auto rows = detail::to_int_matrix(rows_in);
    const std::size_t cols = rows.front().size();
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols && lead < rows.size(); ++c) {
        // Euclid on column c among rows lead..end
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t r = lead; r < rows.size(); ++r)
                if (rows[r][c] != 0 &&
                    (!best || detail::abs_int(rows[r][c]) < detail::abs_int(rows[*best][c])))
                    best = r;
            if (!best) break;
            std::swap(rows[*best], rows[lead]);
            bool done = true;
            for (std::size_t r = lead + 1; r < rows.size(); ++r) {
                if (rows[r][c] == 0) continue;
                const Integer q = floor_div(rows[r][c], rows[lead][c]);
                for (std::size_t j = c; j < cols; ++j) rows[r][j] -= q * rows[lead][j];
                if (rows[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (lead >= rows.size() || rows[lead][c] == 0) continue;
        if (rows[lead][c] < 0)
            for (auto& x : rows[lead]) x = -x;
        for (std::size_t r = 0; r < lead; ++r) {
            const Integer q = floor_div(rows[r][c], rows[lead][c]);
            if (q != 0)
                for (std::size_t j = c; j < cols; ++j) rows[r][j] -= q * rows[lead][j];
        }
        ++lead;
    }
    rows.resize(lead);
    return detail::from_int_matrix(rows);
}

/// Canonical basis of the span of `rows` (RREF over fields, HNF over Z).
inline Matrix canonical_span(const Matrix& rows, const CoefficientDomain& dom) {
    Matrix nonzero;
    for (const auto& r : rows)
        if (!is_zero(r)) nonzero.push_back(r);
    if (nonzero.empty()) return {};
    return dom.is_field() ? rref(std::move(nonzero), dom) : hermite_normal_form(nonzero);
}

inline std::optional<std::size_t> pivot_column(const Vector& row) {
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0) return j;
    return std::nullopt;
}

/// Membership in a span given in canonical form.
inline bool in_canonical_span(const Matrix& basis, Vector v, const CoefficientDomain& dom) {
    for (auto& x : v) x = dom.normalize(x);
    for (const auto& row : basis) {
        const auto p = pivot_column(row);
        if (!p || v[*p] == 0) continue;
        Scalar factor;
        if (dom.is_field()) {
            factor = v[*p]; // pivots are 1
        } else {
            const Integer a = numerator(v[*p]);
            const Integer b = numerator(row[*p]);
            if (a % b != 0) return false;
            factor = Scalar(a / b);
        }
        for (std::size_t j = 0; j < v.size(); ++j)
            if (row[j] != 0) v[j] = dom.sub(v[j], dom.mul(factor, row[j]));
    }
    return is_zero(v);
}

struct SmithForm {
    Matrix diagonal; ///< D = left * A * right, diagonal with d_i | d_{i+1}
    Matrix left;     ///< unimodular, rows x rows
    Matrix right;    ///< unimodular, cols x cols
    std::size_t rank = 0;
};

/// Smith normal form of an integer matrix with unimodular transforms.
inline SmithForm smith_normal_form(const Matrix& a_in, std::size_t cols) {
    using detail::abs_int;
    const std::size_t rows = a_in.size();
    detail::IntMatrix a = detail::to_int_matrix(a_in);
    detail::IntMatrix u(rows, std::vector<Integer>(rows, 0));
    detail::IntMatrix v(cols, std::vector<Integer>(cols, 0));
    for (std::size_t i = 0; i < rows; ++i) u[i][i] = 1;
    for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1;

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        std::swap(u[i], u[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& row : a) std::swap(row[i], row[j]);
        for (auto& row : v) std::swap(row[i], row[j]);
    };
    // row_i -= q * row_j
    auto row_sub = [&](std::size_t i, std::size_t j, const Integer& q) {
        for (std::size_t k = 0; k < cols; ++k) a[i][k] -= q * a[j][k];
        for (std::size_t k = 0; k < rows; ++k) u[i][k] -= q * u[j][k];
    };
    // col_i -= q * col_j
    auto col_sub = [&](std::size_t i, std::size_t j, const Integer& q) {
        for (std::size_t k = 0; k < rows; ++k) a[k][i] -= q * a[k][j];
        for (std::size_t k = 0; k < cols; ++k) v[k][i] -= q * v[k][j];
    };

    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
        // smallest nonzero entry of the remaining block
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (!best || abs_int(a[i][j]) < abs_int(a[best->first][best->second])))
                    best = {i, j};
        if (!best) break;
        swap_rows(t, best->first);
        swap_cols(t, best->second);
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                row_sub(i, t, floor_div(a[i][t], a[t][t]));
                if (a[i][t] != 0) {
                    clean = false;
                    if (abs_int(a[i][t]) < abs_int(a[t][t])) swap_rows(t, i);
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                col_sub(j, t, floor_div(a[t][j], a[t][t]));
                if (a[t][j] != 0) {
                    clean = false;
                    if (abs_int(a[t][j]) < abs_int(a[t][t])) swap_cols(t, j);
                }
            }
            if (!clean) continue;
            // divisibility of the remaining block
            std::optional<std::size_t> offender;
            for (std::size_t i = t + 1; i < rows && !offender; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        offender = i;
                        break;
                    }
            if (!offender) break;
            row_sub(t, *offender, Integer(-1)); // row_t += row_offender
        }
        if (a[t][t] < 0) {
            for (auto& x : a[t]) x = -x;
            for (auto& x : u[t]) x = -x;
        }
    }
    SmithForm out;
    out.diagonal = detail::from_int_matrix(a);
    out.left = detail::from_int_matrix(u);
    out.right = detail::from_int_matrix(v);
    out.rank = t;
    return out;
}

/// Basis (as rows) of { x : A x = 0 } where A has `cols` columns, in
/// canonical form. Over Z this is a lattice basis of the saturated kernel.
inline Matrix kernel_basis(const Matrix& a, std::size_t cols, const CoefficientDomain& dom) {
    if (cols == 0) return {};
    Matrix basis;
    if (dom.is_field()) {
        const Matrix r = rref(a, dom);
        std::vector<bool> is_pivot(cols, false);
        std::vector<std::size_t> pivots;
        for (const auto& row : r) {
            const auto p = pivot_column(row);
            is_pivot[*p] = true;
            pivots.push_back(*p);
        }
        for (std::size_t free = 0; free < cols; ++free) {
            if (is_pivot[free]) continue;
            Vector x = zero_vector(cols);
            x[free] = 1;
            for (std::size_t i = 0; i < r.size(); ++i) x[pivots[i]] = dom.neg(r[i][free]);
            basis.push_back(std::move(x));
        }
    } else {
        if (a.empty()) {
            basis = identity_matrix(cols);
        } else {
            const SmithForm snf = smith_normal_form(a, cols);
            for (std::size_t j = snf.rank; j < cols; ++j) {
                Vector x = zero_vector(cols);
                for (std::size_t i = 0; i < cols; ++i) x[i] = snf.right[i][j];
                basis.push_back(std::move(x));
            }
        }
    }
    return canonical_span(basis, dom);
}

/// Incremental independence test over the fraction field of the domain
/// (Q for Z). Used to pick independent subsets without changing vectors.
class IncrementalEchelon {
public:
    explicit IncrementalEchelon(const CoefficientDomain& dom)
        : field_(dom.is_field() ? dom : CoefficientDomain::rationals()) {}

    /// Inserts v if it is independent of what was inserted before.
    bool insert(const Vector& v_in) {
        Vector v = v_in;
        for (auto& x : v) x = field_.normalize(x);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const std::size_t p = pivots_[i];
            if (v[p] == 0) continue;
            const Scalar factor = v[p];
            for (std::size_t j = 0; j < v.size(); ++j)
                if (rows_[i][j] != 0) v[j] = field_.sub(v[j], field_.mul(factor, rows_[i][j]));
        }
        const auto p = pivot_column(v);
        if (!p) return false;
        const Scalar inv = field_.inverse(v[*p]);
        for (auto& x : v) x = field_.mul(x, inv);
        rows_.push_back(std::move(v));
        pivots_.push_back(*p);
        return true;
    }

    std::size_t rank() const noexcept { return rows_.size(); }

private:
    CoefficientDomain field_;
    Matrix rows_;
    std::vector<std::size_t> pivots_;
};

} // namespace mcat
