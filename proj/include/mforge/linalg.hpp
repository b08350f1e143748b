#ifndef MFORGE_LINALG_HPP
#define MFORGE_LINALG_HPP

// Small dense double-precision helpers. Everything here is value-semantic
// and sized for this problem (n <= ~4 momentum dimensions, d <= ~24 facets,
// metrics up to 2d x 2d).

#include <cstddef>
#include <optional>
#include <vector>

namespace mforge::linalg {

using Vec = std::vector<double>;

class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

    static Mat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Mat transposed() const;

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(double s);

private:
    int rows_, cols_;
    std::vector<double> a_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& v);

double dot(const Vec& a, const Vec& b);
double inf_norm(const Vec& v);
double max_abs(const Mat& a);
double trace(const Mat& a);

// Lower-triangular Cholesky factor of a symmetric matrix, or nullopt if a
// pivot falls at or below pivot_floor (absolute). Callers derive the floor
// from the matrix scale, typically kTolLin * trace(A).
std::optional<Mat> cholesky(const Mat& a, double pivot_floor);

Vec cholesky_solve(const Mat& chol_lower, const Vec& b);
Mat cholesky_inverse(const Mat& chol_lower);

// LU solve with partial pivoting; nullopt on (near-)singular systems.
std::optional<Vec> lu_solve(Mat a, Vec b);

}  // namespace mforge::linalg

#endif
