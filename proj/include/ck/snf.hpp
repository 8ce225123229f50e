#pragma once

#include <cstddef>
#include <optional>

#include "ck/int_matrix.hpp"

namespace ck {

/// Smith normal form: u * input * v == d, with u, v unimodular and d diagonal
/// with non-negative entries d1 | d2 | ... followed by zeros.
struct SnfResult {
    IntMatrix u; // rows x rows
    IntMatrix d; // rows x cols
    IntMatrix v; // cols x cols

    std::size_t rank() const {
        std::size_t r = 0;
        const std::size_t n = std::min(d.rows(), d.cols());
        while (r < n && d(r, r) != 0) ++r;
        return r;
    }

    /// Diagonal entries >= 2 (unit and zero divisors stripped).
    IntVec torsion_divisors() const {
        IntVec out;
        const std::size_t n = std::min(d.rows(), d.cols());
        for (std::size_t i = 0; i < n; ++i)
            if (d(i, i) >= 2) out.push_back(d(i, i));
        return out;
    }
};

struct SnfWithInverse {
    SnfResult snf;
    IntMatrix u_inverse; // accumulated during elimination, never recomputed
};

namespace detail {

// Quotient with minimal-magnitude remainder: |a - q*b| <= |b| / 2.
inline Int round_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (2 * abs_int(r) > abs_int(b)) q += ((r < 0) == (b < 0)) ? 1 : -1;
    return q;
}

// Row/column eliminator that keeps u * original * v == d at every step and
// maintains u's inverse by applying the inverse column operations.
struct SnfEngine {
    IntMatrix d, u, v, uinv;

    explicit SnfEngine(const IntMatrix& m)
        : d(m), u(IntMatrix::identity(m.rows())), v(IntMatrix::identity(m.cols())),
          uinv(IntMatrix::identity(m.rows())) {}

    void swap_rows(std::size_t a, std::size_t b) {
        d.swap_rows(a, b);
        u.swap_rows(a, b);
        uinv.swap_cols(a, b);
    }
    void add_row(std::size_t dst, std::size_t src, const Int& q) {
        d.add_row_multiple(dst, src, q);
        u.add_row_multiple(dst, src, q);
        uinv.add_col_multiple(src, dst, -q);
    }
    void negate_row(std::size_t i) {
        d.negate_row(i);
        u.negate_row(i);
        uinv.negate_col(i);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        d.swap_cols(a, b);
        v.swap_cols(a, b);
    }
    void add_col(std::size_t dst, std::size_t src, const Int& q) {
        d.add_col_multiple(dst, src, q);
        v.add_col_multiple(dst, src, q);
    }

    // Smallest nonzero |entry| of the block [t.., t..), row-major tie break.
    bool move_pivot(std::size_t t) {
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < d.rows(); ++i)
            for (std::size_t j = t; j < d.cols(); ++j) {
                if (d(i, j) == 0) continue;
                if (!found || abs_int(d(i, j)) < abs_int(d(pi, pj))) {
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) return false;
        swap_rows(t, pi);
        swap_cols(t, pj);
        return true;
    }

    void run() {
        const std::size_t steps = std::min(d.rows(), d.cols());
        for (std::size_t t = 0; t < steps; ++t) {
            if (!move_pivot(t)) break; // remaining block is zero
            while (true) {
                // one sweep of minimal-remainder reductions; remainders are
                // at most half the pivot, so re-picking the global minimum
                // makes the pivot shrink geometrically
                bool clear = true;
                for (std::size_t i = t + 1; i < d.rows(); ++i) {
                    if (d(i, t) == 0) continue;
                    add_row(i, t, -round_div(d(i, t), d(t, t)));
                    if (d(i, t) != 0) clear = false;
                }
                for (std::size_t j = t + 1; j < d.cols(); ++j) {
                    if (d(t, j) == 0) continue;
                    add_col(j, t, -round_div(d(t, j), d(t, t)));
                    if (d(t, j) != 0) clear = false;
                }
                if (!clear) {
                    move_pivot(t);
                    continue;
                }
                // pivot must divide the remaining block
                bool divides = true;
                for (std::size_t i = t + 1; i < d.rows() && divides; ++i)
                    for (std::size_t j = t + 1; j < d.cols() && divides; ++j)
                        if (d(i, j) % d(t, t) != 0) {
                            add_row(t, i, 1);
                            divides = false;
                        }
                if (divides) break;
            }
        }
        for (std::size_t t = 0; t < steps; ++t)
            if (d(t, t) < 0) negate_row(t);
    }
};

} // namespace detail

inline SnfWithInverse snf_with_inverse(const IntMatrix& m) {
    detail::SnfEngine e(m);
    e.run();
    return {{std::move(e.u), std::move(e.d), std::move(e.v)}, std::move(e.uinv)};
}

inline SnfResult snf(const IntMatrix& m) { return snf_with_inverse(m).snf; }

/// Integer solution x of m * x = b, if one exists.
inline std::optional<IntVec> solve_linear(const IntMatrix& m, const IntVec& b) {
    if (b.size() != m.rows()) throw input_error("solve_linear: rhs length differs from row count");
    SnfResult s = snf(m);
    IntVec c = s.u.mul_vec(b);
    IntVec y(m.cols());
    const std::size_t n = std::min(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i < n && s.d(i, i) != 0) {
            if (c[i] % s.d(i, i) != 0) return std::nullopt;
            y[i] = c[i] / s.d(i, i);
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return s.v.mul_vec(y);
}

/// Columnwise integer solution X of m * X = b, if one exists.
inline std::optional<IntMatrix> solve_linear(const IntMatrix& m, const IntMatrix& b) {
    if (b.rows() != m.rows()) throw input_error("solve_linear: rhs rows differ");
    IntMatrix x(m.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto col = solve_linear(m, b.col_vec(j));
        if (!col) return std::nullopt;
        x.set_col(j, *col);
    }
    return x;
}

/// Basis of the integer null space {x : m * x = 0}, as matrix columns.
/// The basis is saturated: every integer solution is an integer combination.
inline IntMatrix kernel_basis(const IntMatrix& m) {
    SnfResult s = snf(m);
    const std::size_t rank = s.rank();
    std::vector<std::size_t> rows(m.cols()), cols(m.cols() - rank);
    for (std::size_t i = 0; i < m.cols(); ++i) rows[i] = i;
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = rank + j;
    return s.v.select(rows, cols);
}

/// Exact inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
    if (!m.is_square()) throw input_error("unimodular_inverse: matrix not square");
    SnfWithInverse s = snf_with_inverse(m);
    if (s.snf.d != IntMatrix::identity(m.rows()))
        throw input_error("unimodular_inverse: matrix is not unimodular");
    return s.snf.v * s.snf.u; // u*m*v = 1  =>  m^-1 = v*u
}

} // namespace ck
