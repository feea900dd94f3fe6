#pragma once

#include <cstddef>
#include <vector>

namespace doi {

using Vec = std::vector<double>;

/// Dense row-major matrix, sized for the small systems of this library
/// (n x n tensors with n <= 8, Galerkin systems up to a few hundred).
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n);
    static Mat zero(int r, int c) { return Mat(r, c); }
};

Mat operator+(const Mat& A, const Mat& B);
Mat operator-(const Mat& A, const Mat& B);
Mat operator*(double s, const Mat& A);
Mat operator*(const Mat& A, const Mat& B);
Vec operator*(const Mat& A, const Vec& x);

Mat transpose(const Mat& A);
Mat sym_part(const Mat& A);
Mat antisym_part(const Mat& A);
Mat outer(const Vec& u, const Vec& v);
double trace(const Mat& A);
double frobenius_inner(const Mat& A, const Mat& B); // A:B
double frobenius_norm(const Mat& A);

double dot(const Vec& u, const Vec& v);
double norm(const Vec& u);
Vec operator+(const Vec& u, const Vec& v);
Vec operator-(const Vec& u, const Vec& v);
Vec operator*(double s, const Vec& u);
/// v - (v.omega) omega, the projection onto the hyperplane normal to omega.
Vec project_perp(const Vec& omega, const Vec& v);

/// Solve A x = b by LU with partial pivoting. A is copied.
Vec lu_solve(Mat A, Vec b);

/// Solve the SPD system A x = b by Cholesky; falls back on lu_solve if a
/// non-positive pivot appears.
Vec spd_solve(const Mat& A, const Vec& b);

/// Thin SVD by one-sided Jacobi. Returns singular values (descending) and,
/// through V, an orthonormal basis of right singular vectors as columns.
struct SvdResult {
    Vec sigma;  // descending
    Mat U;      // rows x rank-cols, columns are left singular vectors
    Mat V;      // cols x cols, columns are right singular vectors
};
SvdResult jacobi_svd(const Mat& A);

/// Orthonormalize the columns of A in place (modified Gram-Schmidt).
Mat orthonormal_columns(const Mat& A);

/// sin of the largest principal angle between the column spans of X and Y
/// (both orthonormalized internally). Accurate for small angles.
double subspace_angle_sin(const Mat& X, const Mat& Y);

} // namespace doi
