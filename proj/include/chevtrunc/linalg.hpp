#pragma once

// Dense exact linear algebra: matrices over arbitrary commutative rings,
// rational elimination, integer Hermite/Smith forms with transform
// tracking, lattice saturation and index computations, and the
// division-free Berkowitz characteristic polynomial.

#include "chevtrunc/common.hpp"

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

namespace chevtrunc {

template <typename T>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    Mat transposed() const {
        Mat t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
};

template <typename T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
    if (x.cols != y.rows) throw std::logic_error("matmul: shape mismatch");
    Mat<T> z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const T& v = x(i, k);
            if (v == T(0)) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

template <typename T>
Mat<T> operator+(const Mat<T>& x, const Mat<T>& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::logic_error("matadd: shape mismatch");
    Mat<T> z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
    return z;
}

template <typename T>
Mat<T> operator-(const Mat<T>& x, const Mat<T>& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::logic_error("matsub: shape mismatch");
    Mat<T> z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
    return z;
}

template <typename T>
std::vector<T> operator*(const Mat<T>& m, const std::vector<T>& v) {
    if (m.cols != v.size()) throw std::logic_error("matvec: shape mismatch");
    std::vector<T> r(m.rows, T(0));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m(i, j) != T(0)) r[i] += m(i, j) * v[j];
    return r;
}

template <typename T>
Mat<T> mat_cast(const Mat<Int>& m) {
    Mat<T> r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = T(m.a[i]);
    return r;
}

inline Mat<Int> mat_round(const Mat<Rat>& m) {
    Mat<Int> r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = to_int(m.a[i]);
    return r;
}

// ---- rational elimination ------------------------------------------------

struct Rref {
    Mat<Rat> r;
    std::vector<std::size_t> pivot_cols;
};

inline Rref rref(Mat<Rat> m) {
    Rref out;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < m.cols && lead < m.rows; ++col) {
        std::size_t piv = lead;
        while (piv < m.rows && m(piv, col) == 0) ++piv;
        if (piv == m.rows) continue;
        for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(lead, j), m(piv, j));
        Rat inv = Rat(1) / m(lead, col);
        for (std::size_t j = 0; j < m.cols; ++j) m(lead, j) *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == lead || m(i, col) == 0) continue;
            Rat f = m(i, col);
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) -= f * m(lead, j);
        }
        out.pivot_cols.push_back(col);
        ++lead;
    }
    out.r = std::move(m);
    return out;
}

inline std::size_t rank(const Mat<Rat>& m) { return rref(m).pivot_cols.size(); }

inline std::size_t rank(const Mat<Int>& m) { return rank(mat_cast<Rat>(m)); }

// Basis of the right kernel, one column per basis vector.
inline Mat<Rat> kernel_basis(const Mat<Rat>& m) {
    Rref e = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : e.pivot_cols) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat<Rat> k(m.cols, free_cols.size());
    for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
        std::size_t fc = free_cols[fi];
        k(fc, fi) = 1;
        for (std::size_t pi = 0; pi < e.pivot_cols.size(); ++pi)
            k(e.pivot_cols[pi], fi) = -e.r(pi, fc);
    }
    return k;
}

// Solves m x = b; nullopt when inconsistent. Free variables are set to 0.
inline std::optional<std::vector<Rat>> solve(const Mat<Rat>& m, const std::vector<Rat>& b) {
    Mat<Rat> aug(m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
        aug(i, m.cols) = b[i];
    }
    Rref e = rref(std::move(aug));
    std::vector<Rat> x(m.cols, Rat(0));
    for (std::size_t pi = 0; pi < e.pivot_cols.size(); ++pi) {
        if (e.pivot_cols[pi] == m.cols) return std::nullopt; // pivot in the RHS column
        x[e.pivot_cols[pi]] = e.r(pi, m.cols);
    }
    return x;
}

// ---- Berkowitz characteristic polynomial ---------------------------------

// Coefficients of det(xI - A) from the leading term down:
// result[0] = 1, p(x) = sum_i result[i] x^{n-i}. Division-free, so it works
// over any commutative ring (exact integers, residue rings, ...).
template <typename R>
std::vector<R> charpoly(const Mat<R>& A) {
    std::size_t n = A.rows;
    if (A.cols != n) throw std::logic_error("charpoly: square matrix required");
    std::vector<R> c{R(1)};
    if (n == 0) return c;
    c.push_back(R(0) - A(0, 0));
    for (std::size_t t = 1; t < n; ++t) {
        // Krylov products s_j = row . M^j . col against the leading t x t block.
        std::vector<R> v(t), s(t);
        for (std::size_t i = 0; i < t; ++i) v[i] = A(i, t);
        for (std::size_t j = 0; j < t; ++j) {
            R acc(0);
            for (std::size_t i = 0; i < t; ++i) acc += A(t, i) * v[i];
            s[j] = acc;
            if (j + 1 < t) {
                std::vector<R> w(t, R(0));
                for (std::size_t i = 0; i < t; ++i)
                    for (std::size_t k = 0; k < t; ++k) w[i] += A(i, k) * v[k];
                v = std::move(w);
            }
        }
        std::vector<R> toep(t + 2, R(0));
        toep[0] = R(1);
        toep[1] = R(0) - A(t, t);
        for (std::size_t j = 0; j < t; ++j) toep[j + 2] = R(0) - s[j];
        std::vector<R> nc(t + 2, R(0));
        for (std::size_t i = 0; i < nc.size(); ++i)
            for (std::size_t j = 0; j < c.size() && j <= i; ++j)
                if (i - j < toep.size()) nc[i] += toep[i - j] * c[j];
        c = std::move(nc);
    }
    return c;
}

template <typename R>
R det(const Mat<R>& A) {
    auto c = charpoly(A);
    R d = c.back();
    if (A.rows % 2 == 1) d = R(0) - d;
    return d; // det(A) = (-1)^n * p(0)
}

// ---- Hermite and Smith forms ----------------------------------------------

// Column-style Hermite normal form of the column lattice of A: returns H
// whose columns are the canonical lattice basis. Pivots positive, strictly
// increasing pivot rows, entries left of a pivot reduced into [0, pivot).
inline Mat<Int> hnf_cols(Mat<Int> A) {
    std::size_t n = A.rows, m = A.cols;
    std::size_t col = 0;
    for (std::size_t row = 0; row < n && col < m; ++row) {
        // Clear row entries across columns >= col by gcd column ops.
        for (std::size_t j = col + 1; j < m; ++j) {
            while (A(row, j) != 0) {
                if (A(row, col) == 0) {
                    for (std::size_t i = 0; i < n; ++i) std::swap(A(i, col), A(i, j));
                    continue;
                }
                Int q = A(row, j) / A(row, col);
                for (std::size_t i = 0; i < n; ++i) A(i, j) -= q * A(i, col);
                if (A(row, j) != 0)
                    for (std::size_t i = 0; i < n; ++i) std::swap(A(i, col), A(i, j));
            }
        }
        if (A(row, col) == 0) continue;
        if (A(row, col) < 0)
            for (std::size_t i = 0; i < n; ++i) A(i, col) = -A(i, col);
        for (std::size_t j = 0; j < col; ++j) {
            // Reduce earlier columns against this pivot using floor division.
            Int q = A(row, j) / A(row, col);
            if (A(row, j) - q * A(row, col) < 0) q -= 1;
            if (q != 0)
                for (std::size_t i = 0; i < n; ++i) A(i, j) -= q * A(i, col);
        }
        ++col;
    }
    Mat<Int> h(n, col);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < col; ++j) h(i, j) = A(i, j);
    return h;
}

struct Snf {
    Mat<Int> d;               // diagonal with divisibility chain
    Mat<Int> u, uinv;         // row transform: u * a * v = d
    Mat<Int> v, vinv;         // a = uinv * d * vinv
    std::size_t rank = 0;
};

// Smith normal form with full transform tracking: u*A*v = d, A = uinv*d*vinv.
inline Snf snf(Mat<Int> A) {
    std::size_t n = A.rows, m = A.cols;
    Snf s;
    s.u = Mat<Int>::identity(n);
    s.uinv = Mat<Int>::identity(n);
    s.v = Mat<Int>::identity(m);
    s.vinv = Mat<Int>::identity(m);

    auto row_swap = [&](std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < m; ++k) std::swap(A(i, k), A(j, k));
        for (std::size_t k = 0; k < n; ++k) std::swap(s.u(i, k), s.u(j, k));
        for (std::size_t k = 0; k < n; ++k) std::swap(s.uinv(k, i), s.uinv(k, j));
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < n; ++k) std::swap(A(k, i), A(k, j));
        for (std::size_t k = 0; k < m; ++k) std::swap(s.v(k, i), s.v(k, j));
        for (std::size_t k = 0; k < m; ++k) std::swap(s.vinv(i, k), s.vinv(j, k));
    };
    auto row_addmul = [&](std::size_t dst, std::size_t src, const Int& f) {
        // row dst += f * row src;  uinv column src -= f * column dst
        for (std::size_t k = 0; k < m; ++k) A(dst, k) += f * A(src, k);
        for (std::size_t k = 0; k < n; ++k) s.u(dst, k) += f * s.u(src, k);
        for (std::size_t k = 0; k < n; ++k) s.uinv(k, src) -= f * s.uinv(k, dst);
    };
    auto col_addmul = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t k = 0; k < n; ++k) A(k, dst) += f * A(k, src);
        for (std::size_t k = 0; k < m; ++k) s.v(k, dst) += f * s.v(k, src);
        for (std::size_t k = 0; k < m; ++k) s.vinv(src, k) -= f * s.vinv(dst, k);
    };
    auto row_negate = [&](std::size_t i) {
        for (std::size_t k = 0; k < m; ++k) A(i, k) = -A(i, k);
        for (std::size_t k = 0; k < n; ++k) s.u(i, k) = -s.u(i, k);
        for (std::size_t k = 0; k < n; ++k) s.uinv(k, i) = -s.uinv(k, i);
    };

    // Quotient rounded to nearest, so remainders are at most half the divisor.
    auto quot_near = [](const Int& a, const Int& b) {
        Int q = a / b;
        Int r = a - q * b;
        if (2 * abs(r) > abs(b)) q += ((r < 0) == (b < 0)) ? 1 : -1;
        return q;
    };

    std::size_t t = 0;
    while (t < n && t < m) {
        // Re-select the least-magnitude nonzero entry as pivot on every pass.
        // Any nonzero remainder left in row/column t is at most half the
        // pivot, so the pivot shrinks strictly until both clear and the pivot
        // divides the whole trailing block; locking the pivot position and
        // swapping rows through it instead lets entries blow up.
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best = 0;
        for (std::size_t i = t; i < n; ++i)
            for (std::size_t j = t; j < m; ++j) {
                if (A(i, j) == 0) continue;
                Int mag = abs(A(i, j));
                if (!found || mag < best) {
                    found = true;
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        if (pi != t) row_swap(t, pi);
        if (pj != t) col_swap(t, pj);

        bool clean = true;
        for (std::size_t i = t + 1; i < n; ++i) {
            if (A(i, t) == 0) continue;
            row_addmul(i, t, -quot_near(A(i, t), A(t, t)));
            if (A(i, t) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < m; ++j) {
            if (A(t, j) == 0) continue;
            col_addmul(j, t, -quot_near(A(t, j), A(t, t)));
            if (A(t, j) != 0) clean = false;
        }
        if (!clean) continue;

        // Fold in one trailing entry the pivot fails to divide; the next pass
        // shrinks the pivot toward their gcd. Pivot-divides-block at every
        // step is exactly what yields the chain d1 | d2 | ...
        bool divides = true;
        for (std::size_t i = t + 1; i < n && divides; ++i)
            for (std::size_t j = t + 1; j < m; ++j)
                if (A(i, j) % A(t, t) != 0) {
                    row_addmul(t, i, 1);
                    divides = false;
                    break;
                }
        if (!divides) continue;

        if (A(t, t) < 0) row_negate(t);
        ++t;
    }
    s.rank = t;
    s.d = std::move(A);
    return s;
}

// Basis (columns) of the integer kernel of A.
inline Mat<Int> kernel_basis_int(const Mat<Int>& A) {
    Snf s = snf(A);
    Mat<Int> k(A.cols, A.cols - s.rank);
    for (std::size_t j = s.rank; j < A.cols; ++j)
        for (std::size_t i = 0; i < A.cols; ++i) k(i, j - s.rank) = s.v(i, j);
    return k;
}

// Canonical basis of Qspan(columns of A) intersected with Z^n.
inline Mat<Int> saturate_columns(const Mat<Int>& A) {
    Snf s = snf(A);
    Mat<Int> b(A.rows, s.rank);
    for (std::size_t j = 0; j < s.rank; ++j)
        for (std::size_t i = 0; i < A.rows; ++i) b(i, j) = s.uinv(i, j);
    return hnf_cols(b);
}

// True when the column lattice already equals its saturation.
inline bool columns_saturated(const Mat<Int>& A) {
    Snf s = snf(A);
    for (std::size_t i = 0; i < s.rank; ++i)
        if (s.d(i, i) != 1) return false;
    return true;
}

// Index [P : L] for lattices L <= P of equal full rank, both given by basis
// columns. Exact; asserts the containment.
inline Int lattice_index(const Mat<Int>& P, const Mat<Int>& L) {
    if (P.cols != L.cols || P.rows != L.rows) throw std::logic_error("lattice_index: shape mismatch");
    Mat<Rat> pq = mat_cast<Rat>(P);
    Mat<Int> X(P.cols, L.cols);
    for (std::size_t j = 0; j < L.cols; ++j) {
        std::vector<Rat> b(L.rows);
        for (std::size_t i = 0; i < L.rows; ++i) b[i] = Rat(L(i, j));
        auto x = solve(pq, b);
        if (!x) throw std::logic_error("lattice_index: L not inside span(P)");
        for (std::size_t i = 0; i < P.cols; ++i) {
            // verify the solution is genuinely integral (containment check)
            X(i, j) = to_int((*x)[i]);
        }
    }
    Mat<Rat> check = pq * mat_cast<Rat>(X);
    for (std::size_t i = 0; i < L.a.size(); ++i)
        if (check.a[i] != Rat(L.a[i])) throw std::logic_error("lattice_index: containment check failed");
    Int d = det(X);
    if (d == 0) throw std::logic_error("lattice_index: L has lower rank than P");
    return abs(d);
}

// Cardinality of Z^n / (column lattice of A); asserts finiteness.
inline Int cokernel_cardinality(const Mat<Int>& A) {
    Snf s = snf(A);
    if (s.rank < A.rows) throw std::logic_error("cokernel_cardinality: infinite cokernel");
    Int c = 1;
    for (std::size_t i = 0; i < s.rank; ++i) c *= s.d(i, i);
    return abs(c);
}

// Horizontal concatenation.
inline Mat<Int> hcat(const Mat<Int>& A, const Mat<Int>& B) {
    if (A.rows != B.rows) throw std::logic_error("hcat: row mismatch");
    Mat<Int> C(A.rows, A.cols + B.cols);
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
        for (std::size_t j = 0; j < B.cols; ++j) C(i, A.cols + j) = B(i, j);
    }
    return C;
}

inline Mat<Int> vcat(const Mat<Int>& A, const Mat<Int>& B) {
    if (A.cols != B.cols) throw std::logic_error("vcat: col mismatch");
    Mat<Int> C(A.rows + B.rows, A.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
    for (std::size_t i = 0; i < B.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) C(A.rows + i, j) = B(i, j);
    return C;
}

// Cardinality of the kernel of the induced map (Z^n / L1) -> (Z^m / L2),
// where the map is x -> Dx and D(L1) <= L2 is required. L1, L2 are basis
// columns of full-rank lattices (finite quotients).
inline Int quotient_kernel_cardinality(const Mat<Int>& D, const Mat<Int>& L1, const Mat<Int>& L2) {
    // Preimage lattice P = { x : Dx in L2 } is the x-projection of
    // ker [D | -L2]; the projection map is onto, so generator images span P.
    Mat<Int> neg = L2;
    for (auto& e : neg.a) e = -e;
    Mat<Int> K = kernel_basis_int(hcat(D, neg));
    Mat<Int> Pgen(D.cols, K.cols);
    for (std::size_t i = 0; i < D.cols; ++i)
        for (std::size_t j = 0; j < K.cols; ++j) Pgen(i, j) = K(i, j);
    Mat<Int> P = hnf_cols(Pgen);
    if (P.cols != D.cols) throw std::logic_error("quotient_kernel_cardinality: preimage not full rank");
    return lattice_index(P, hnf_cols(L1));
}

} // namespace chevtrunc
