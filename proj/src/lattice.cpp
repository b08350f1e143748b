#include "mforge/lattice.hpp"

#include <cassert>
#include <cstdlib>
#include <stdexcept>

namespace mforge::lattice {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
    if (rows.empty()) throw std::invalid_argument("from_rows: no rows");
    IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols())
            throw std::invalid_argument("from_rows: ragged rows");
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    assert(cols_ == o.rows_);
    IntMatrix c(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& aik = (*this)(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < o.cols_; ++j) c(i, j) += aik * o(k, j);
        }
    return c;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    return a_ == o.a_;
}

bool IntMatrix::is_zero() const {
    for (const Int& v : a_)
        if (v != 0) return false;
    return true;
}

std::vector<Int> SnfDecomposition::invariant_factors() const {
    std::vector<Int> d;
    int n = std::min(s.rows(), s.cols());
    d.reserve(n);
    for (int i = 0; i < n; ++i) d.push_back(s(i, i));
    return d;
}

int SnfDecomposition::rank() const {
    int r = 0;
    for (const Int& d : invariant_factors())
        if (d != 0) ++r;
    return r;
}

namespace {

// elementary operations on s mirrored into the unimodular factors;
// row ops update u (left factor), column ops update v (right factor)
struct SnfWork {
    IntMatrix s, u, v;

    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int j = 0; j < s.cols(); ++j) mpz_swap(s(a, j).get_mpz_t(), s(b, j).get_mpz_t());
        for (int j = 0; j < u.cols(); ++j) mpz_swap(u(a, j).get_mpz_t(), u(b, j).get_mpz_t());
    }
    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int i = 0; i < s.rows(); ++i) mpz_swap(s(i, a).get_mpz_t(), s(i, b).get_mpz_t());
        for (int i = 0; i < v.rows(); ++i) mpz_swap(v(i, a).get_mpz_t(), v(i, b).get_mpz_t());
    }
    void add_row(int dst, int src, const Int& f) {  // row_dst += f * row_src
        if (f == 0) return;
        for (int j = 0; j < s.cols(); ++j) s(dst, j) += f * s(src, j);
        for (int j = 0; j < u.cols(); ++j) u(dst, j) += f * u(src, j);
    }
    void add_col(int dst, int src, const Int& f) {
        if (f == 0) return;
        for (int i = 0; i < s.rows(); ++i) s(i, dst) += f * s(i, src);
        for (int i = 0; i < v.rows(); ++i) v(i, dst) += f * v(i, src);
    }
    void negate_row(int r) {
        for (int j = 0; j < s.cols(); ++j) s(r, j) = -s(r, j);
        for (int j = 0; j < u.cols(); ++j) u(r, j) = -u(r, j);
    }

    // smallest nonzero |entry| in the trailing submatrix, or false if all zero
    bool find_pivot(int t, int& pi, int& pj) const {
        bool found = false;
        Int best;
        for (int i = t; i < s.rows(); ++i)
            for (int j = t; j < s.cols(); ++j) {
                if (s(i, j) == 0) continue;
                Int a = abs(s(i, j));
                if (!found || a < best) {
                    found = true;
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        return found;
    }

    bool pivot_row_col_clear(int t) const {
        for (int i = t + 1; i < s.rows(); ++i)
            if (s(i, t) != 0) return false;
        for (int j = t + 1; j < s.cols(); ++j)
            if (s(t, j) != 0) return false;
        return true;
    }
};

}  // namespace

SnfDecomposition smith_normal_form(const IntMatrix& a) {
    SnfWork w{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols())};
    int nmin = std::min(a.rows(), a.cols());

    for (int t = 0; t < nmin; ++t) {
        int pi, pj;
        if (!w.find_pivot(t, pi, pj)) break;  // trailing block all zero
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        for (;;) {
            // gcd reduction: smallest pivot, truncated quotients; remainders
            // are strictly smaller in |.|, so this terminates
            for (int i = t + 1; i < w.s.rows(); ++i)
                if (w.s(i, t) != 0) w.add_row(i, t, -Int(w.s(i, t) / w.s(t, t)));
            for (int j = t + 1; j < w.s.cols(); ++j)
                if (w.s(t, j) != 0) w.add_col(j, t, -Int(w.s(t, j) / w.s(t, t)));

            if (!w.pivot_row_col_clear(t)) {
                if (!w.find_pivot(t, pi, pj)) break;
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }

            // divisibility fix-up: fold in a non-multiple and keep reducing
            bool fixed = true;
            for (int i = t + 1; i < w.s.rows() && fixed; ++i)
                for (int j = t + 1; j < w.s.cols() && fixed; ++j)
                    if (w.s(i, j) % w.s(t, t) != 0) {
                        w.add_row(t, i, 1);
                        fixed = false;
                    }
            if (fixed) break;
        }

        if (w.s(t, t) < 0) w.negate_row(t);
    }

    return SnfDecomposition{std::move(w.u), std::move(w.s), std::move(w.v)};
}

IntMatrix kernel_basis(const IntMatrix& a) {
    SnfDecomposition snf = smith_normal_form(a);
    int r = snf.rank();
    int k = a.cols() - r;
    // columns of V past the rank map to zero invariant factors; V unimodular
    // makes this a saturated Z-basis of the kernel
    IntMatrix basis(a.cols(), k);
    for (int c = 0; c < k; ++c) {
        int src = r + c;
        int lead = -1;
        for (int i = 0; i < a.cols(); ++i) {
            basis(i, c) = snf.v(i, src);
            if (lead < 0 && basis(i, c) != 0) lead = i;
        }
        if (lead >= 0 && basis(lead, c) < 0)
            for (int i = 0; i < a.cols(); ++i) basis(i, c) = -basis(i, c);
    }
    return basis;
}

std::optional<Int> sublattice_index(const IntMatrix& vectors, int n) {
    if (vectors.rows() != n) throw std::invalid_argument("sublattice_index: vectors not in Z^n");
    SnfDecomposition snf = smith_normal_form(vectors);
    if (snf.rank() < n) return std::nullopt;  // infinite index
    Int idx = 1;
    for (const Int& d : snf.invariant_factors())
        if (d != 0) idx *= d;
    return idx;
}

Int abs_determinant(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("abs_determinant: matrix not square");
    SnfDecomposition snf = smith_normal_form(a);
    Int det = 1;
    for (const Int& d : snf.invariant_factors()) det *= d;
    return det;
}

}  // namespace mforge::lattice
