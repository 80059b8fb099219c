// Exact integer matrices and the Smith/Hermite tool-chain used by all
// group-theoretic computations. Arbitrary precision throughout; no floats.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace straightlab {

using Int = boost::multiprecision::cpp_int;
using Vec = std::vector<Int>;

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

// floored division (quotient rounds toward -inf), used for canonical residues
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int mod_positive(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += (m < 0 ? -m : m);
    return r;
}

// extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        if (a < 0) { x = -1; y = 0; return -a; }
        x = 1; y = 0; return a;
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// inverse of a modulo m > 0; requires gcd(a,m) = 1
inline Int mod_inverse(const Int& a, const Int& m) {
    Int x, y;
    Int g = ext_gcd(mod_positive(a, m), m, x, y);
    if (g != 1) throw std::invalid_argument("mod_inverse: not coprime");
    return mod_positive(x, m);
}

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix from_cols(std::size_t rows, const std::vector<Vec>& cols) {
        IntMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw std::invalid_argument("from_cols: bad column length");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : e_) if (x != 0) return false;
        return true;
    }

    Vec col(std::size_t j) const {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_col(std::size_t j, const Vec& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix operator*(const IntMatrix& b) const {
        if (cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        IntMatrix c(rows_, b.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a * b(k, j);
            }
        return c;
    }

    Vec operator*(const Vec& v) const {
        if (cols_ != v.size()) throw std::invalid_argument("matrix*vector: shape mismatch");
        Vec r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0 && v[j] != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    IntMatrix operator+(const IntMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
        IntMatrix c(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) c.e_[i] = e_[i] + b.e_[i];
        return c;
    }

    IntMatrix operator-(const IntMatrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("matrix diff: shape mismatch");
        IntMatrix c(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) c.e_[i] = e_[i] - b.e_[i];
        return c;
    }

    IntMatrix operator-() const {
        IntMatrix c(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) c.e_[i] = -e_[i];
        return c;
    }

    IntMatrix scaled(const Int& k) const {
        IntMatrix c(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) c.e_[i] = k * e_[i];
        return c;
    }

    // [this | b] side by side
    IntMatrix hstack(const IntMatrix& b) const {
        if (rows_ != b.rows_) throw std::invalid_argument("hstack: row mismatch");
        IntMatrix c(rows_, cols_ + b.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, cols_ + j) = b(i, j);
        }
        return c;
    }

    IntMatrix vstack(const IntMatrix& b) const {
        if (cols_ != b.cols_) throw std::invalid_argument("vstack: col mismatch");
        IntMatrix c(rows_ + b.rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j);
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) c(rows_ + i, j) = b(i, j);
        return c;
    }

    IntMatrix top_rows(std::size_t n) const {
        IntMatrix c(n, cols_);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j);
        return c;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
        }
        os << "]";
        return os.str();
    }

private:
    std::size_t rows_, cols_;
    std::vector<Int> e_;
};

inline Vec vec_add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec vec_scaled(const Int& k, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = k * a[i];
    return r;
}

inline bool vec_is_zero(const Vec& a) {
    for (const auto& x : a) if (x != 0) return false;
    return true;
}

// S = U*M*V with U, V unimodular, S diagonal, d1 | d2 | ..., di >= 0.
struct SmithForm {
    IntMatrix u, s, v;

    std::vector<Int> diagonal() const {
        std::size_t n = std::min(s.rows(), s.cols());
        std::vector<Int> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = s(i, i);
        return d;
    }
};

namespace detail {

inline void swap_rows(IntMatrix& a, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
}

inline void swap_cols(IntMatrix& a, std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
}

inline void row_axpy(IntMatrix& a, std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < a.cols(); ++c) a(dst, c) -= q * a(src, c);
}

inline void col_axpy(IntMatrix& a, std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, dst) -= q * a(r, src);
}

inline void negate_row(IntMatrix& a, std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
}

} // namespace detail

// Elementary row/column reduction with minimal-|pivot| selection. Entry growth
// stays tame at the matrix sizes this library works with.
inline SmithForm smith_normal_form(const IntMatrix& m) {
    using namespace detail;
    const std::size_t nr = m.rows(), nc = m.cols();
    SmithForm f{IntMatrix::identity(nr), m, IntMatrix::identity(nc)};
    IntMatrix& a = f.s;
    IntMatrix& u = f.u;
    IntMatrix& v = f.v;

    const std::size_t rank_bound = std::min(nr, nc);
    for (std::size_t t = 0; t < rank_bound; ++t) {
        // locate the nonzero entry of least magnitude in the trailing block
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best = 0;
        for (std::size_t i = t; i < nr; ++i)
            for (std::size_t j = t; j < nc; ++j) {
                if (a(i, j) == 0) continue;
                Int mag = a(i, j) < 0 ? Int(-a(i, j)) : a(i, j);
                if (!found || mag < best) { found = true; best = mag; pi = i; pj = j; }
            }
        if (!found) break;

        if (pi != t) { swap_rows(a, t, pi); swap_rows(u, t, pi); }
        if (pj != t) { swap_cols(a, t, pj); swap_cols(v, t, pj); }

        for (;;) {
            bool clean = true;
            // clear column t
            for (std::size_t i = t + 1; i < nr; ++i) {
                if (a(i, t) == 0) continue;
                Int q = a(i, t) / a(t, t);
                row_axpy(a, i, t, q);
                row_axpy(u, i, t, q);
                if (a(i, t) != 0) { // remainder became the smaller pivot
                    swap_rows(a, t, i); swap_rows(u, t, i);
                    clean = false;
                }
            }
            if (!clean) continue;
            // clear row t
            for (std::size_t j = t + 1; j < nc; ++j) {
                if (a(t, j) == 0) continue;
                Int q = a(t, j) / a(t, t);
                col_axpy(a, j, t, q);
                col_axpy(v, j, t, q);
                if (a(t, j) != 0) {
                    swap_cols(a, t, j); swap_cols(v, t, j);
                    clean = false;
                    break; // column t is dirty again
                }
            }
            if (!clean) continue;
            // enforce divisibility of the trailing block by the pivot
            bool divides = true;
            for (std::size_t i = t + 1; i < nr && divides; ++i)
                for (std::size_t j = t + 1; j < nc; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        // fold row i into row t and restart the reduction
                        row_axpy(a, t, i, Int(-1));
                        row_axpy(u, t, i, Int(-1));
                        divides = false;
                        break;
                    }
            if (divides) break;
        }

        if (a(t, t) < 0) { negate_row(a, t); negate_row(u, t); }
    }
    return f;
}

// fraction-free determinant (Bareiss)
inline Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    Int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = k;
            while (piv < n && a(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            detail::swap_rows(a, k, piv);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// basis of { x : M x = 0 }, columns of the result; saturated lattice
inline IntMatrix kernel_basis(const IntMatrix& m) {
    SmithForm f = smith_normal_form(m);
    std::size_t rank = 0;
    std::size_t bound = std::min(m.rows(), m.cols());
    for (std::size_t i = 0; i < bound; ++i)
        if (f.s(i, i) != 0) ++rank;
    std::vector<Vec> cols;
    for (std::size_t j = rank; j < m.cols(); ++j) cols.push_back(f.v.col(j));
    return IntMatrix::from_cols(m.cols(), cols);
}

// one integral solution of M x = b, if any
inline std::optional<Vec> solve(const IntMatrix& m, const Vec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: shape mismatch");
    SmithForm f = smith_normal_form(m);
    Vec ub = f.u * b;
    Vec y(m.cols());
    std::size_t bound = std::min(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const Int rhs = ub[i];
        if (i < bound && f.s(i, i) != 0) {
            if (rhs % f.s(i, i) != 0) return std::nullopt;
            y[i] = rhs / f.s(i, i);
        } else if (rhs != 0) {
            return std::nullopt;
        }
    }
    return f.v * y;
}

// solve M X = B column by column
inline std::optional<IntMatrix> solve_matrix(const IntMatrix& m, const IntMatrix& b) {
    IntMatrix x(m.cols(), b.cols());
    SmithForm f = smith_normal_form(m);
    std::size_t bound = std::min(m.rows(), m.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        Vec ub = f.u * b.col(c);
        Vec y(m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i < bound && f.s(i, i) != 0) {
                if (ub[i] % f.s(i, i) != 0) return std::nullopt;
                y[i] = ub[i] / f.s(i, i);
            } else if (ub[i] != 0) {
                return std::nullopt;
            }
        }
        x.set_col(c, f.v * y);
    }
    return x;
}

inline bool in_span(const IntMatrix& m, const Vec& b) { return solve(m, b).has_value(); }

// column Hermite echelon of the lattice spanned by the columns of M;
// pivots are positive and entries left of a pivot in its row are reduced
struct ColEchelon {
    IntMatrix h;                                        // echelon basis, one column per lattice rank
    std::vector<std::pair<std::size_t, std::size_t>> pivots; // (row, col), rows increasing
};

inline ColEchelon col_echelon(const IntMatrix& m) {
    IntMatrix a = m;
    std::size_t r = 0;
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    for (std::size_t i = 0; i < a.rows() && r < a.cols(); ++i) {
        // gcd-fold all columns >= r into column r on row i
        for (std::size_t j = r + 1; j < a.cols(); ++j) {
            while (a(i, j) != 0) {
                if (a(i, r) == 0) { detail::swap_cols(a, r, j); continue; }
                Int q = a(i, j) / a(i, r);
                detail::col_axpy(a, j, r, q);
                if (a(i, j) != 0) detail::swap_cols(a, r, j);
            }
        }
        if (a(i, r) == 0) continue;
        if (a(i, r) < 0)
            for (std::size_t k = 0; k < a.rows(); ++k) a(k, r) = -a(k, r);
        // reduce earlier columns against this pivot
        for (std::size_t j = 0; j < r; ++j) {
            Int q = floor_div(a(i, j), a(i, r));
            detail::col_axpy(a, j, r, q);
        }
        pivots.emplace_back(i, r);
        ++r;
    }
    std::vector<Vec> cols;
    for (std::size_t j = 0; j < r; ++j) cols.push_back(a.col(j));
    return {IntMatrix::from_cols(a.rows(), cols), std::move(pivots)};
}

// canonical representative of v modulo the lattice (pivot coordinates land in [0, pivot))
inline Vec reduce_mod_lattice(const ColEchelon& e, Vec v) {
    for (std::size_t k = 0; k < e.pivots.size(); ++k) {
        auto [i, j] = e.pivots[k];
        Int q = floor_div(v[i], e.h(i, j));
        if (q == 0) continue;
        for (std::size_t r = 0; r < v.size(); ++r) v[r] -= q * e.h(r, j);
    }
    return v;
}

} // namespace straightlab
