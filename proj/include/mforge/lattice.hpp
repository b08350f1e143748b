#ifndef MFORGE_LATTICE_HPP
#define MFORGE_LATTICE_HPP

// Exact integer linear algebra over Z: Smith normal form, saturated kernel
// bases, sublattice indices, determinants. All arithmetic is arbitrary
// precision (GMP), so pivoting can never wrap around silently.

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace mforge::lattice {

using Int = mpz_class;

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static IntMatrix identity(int n);
    // row-major initializer, e.g. from_rows({{2,4},{6,8}})
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Int& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const;

    bool is_zero() const;

private:
    int rows_, cols_;
    std::vector<Int> a_;
};

// U * A * V = S with U, V unimodular and S diagonal, nonnegative, with a
// divisibility chain d1 | d2 | ...
struct SnfDecomposition {
    IntMatrix u;  // rows x rows
    IntMatrix s;  // rows x cols
    IntMatrix v;  // cols x cols
    std::vector<Int> invariant_factors() const;  // diagonal of s
    int rank() const;                            // number of nonzero factors
};

SnfDecomposition smith_normal_form(const IntMatrix& a);

// Columns form a Z-basis of the saturated kernel lattice ker(A) ∩ Z^cols.
// May have zero columns. Each column is sign-normalized (first nonzero
// entry positive) so small examples come out deterministic.
IntMatrix kernel_basis(const IntMatrix& a);

// Index [Z^n : <columns of vectors>], or nullopt when the span has rank < n
// (infinite index). vectors must have n rows.
std::optional<Int> sublattice_index(const IntMatrix& vectors, int n);

// |det A| for square A, exact.
Int abs_determinant(const IntMatrix& a);

}  // namespace mforge::lattice

#endif
