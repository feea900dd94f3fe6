#include "doi/linalg.hpp"
#include "doi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace doi {

Mat Mat::identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Mat operator+(const Mat& A, const Mat& B) {
    Mat C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
    return C;
}

Mat operator-(const Mat& A, const Mat& B) {
    Mat C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
    return C;
}

Mat operator*(double s, const Mat& A) {
    Mat C = A;
    for (double& v : C.a) v *= s;
    return C;
}

Mat operator*(const Mat& A, const Mat& B) {
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

Vec operator*(const Mat& A, const Vec& x) {
    Vec y(A.rows, 0.0);
    for (int i = 0; i < A.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

Mat sym_part(const Mat& A) { return 0.5 * (A + transpose(A)); }
Mat antisym_part(const Mat& A) { return 0.5 * (A - transpose(A)); }

Mat outer(const Vec& u, const Vec& v) {
    Mat M(static_cast<int>(u.size()), static_cast<int>(v.size()));
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) M(static_cast<int>(i), static_cast<int>(j)) = u[i] * v[j];
    return M;
}

double trace(const Mat& A) {
    double t = 0.0;
    for (int i = 0; i < std::min(A.rows, A.cols); ++i) t += A(i, i);
    return t;
}

double frobenius_inner(const Mat& A, const Mat& B) {
    double s = 0.0;
    for (size_t i = 0; i < A.a.size(); ++i) s += A.a[i] * B.a[i];
    return s;
}

double frobenius_norm(const Mat& A) { return std::sqrt(frobenius_inner(A, A)); }

double dot(const Vec& u, const Vec& v) {
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm(const Vec& u) { return std::sqrt(dot(u, u)); }

Vec operator+(const Vec& u, const Vec& v) {
    Vec w = u;
    for (size_t i = 0; i < w.size(); ++i) w[i] += v[i];
    return w;
}

Vec operator-(const Vec& u, const Vec& v) {
    Vec w = u;
    for (size_t i = 0; i < w.size(); ++i) w[i] -= v[i];
    return w;
}

Vec operator*(double s, const Vec& u) {
    Vec w = u;
    for (double& x : w) x *= s;
    return w;
}

Vec project_perp(const Vec& omega, const Vec& v) {
    const double c = dot(omega, v);
    Vec w = v;
    for (size_t i = 0; i < w.size(); ++i) w[i] -= c * omega[i];
    return w;
}

Vec lu_solve(Mat A, Vec b) {
    const int n = A.rows;
    if (A.cols != n || static_cast<int>(b.size()) != n)
        throw invalid_parameter("lu_solve: dimension mismatch");
    std::vector<int> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(A(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > best) { best = std::abs(A(i, k)); p = i; }
        if (best == 0.0) throw numeric_domain_error("lu_solve: singular matrix");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = A(i, k) / A(k, k);
            A(i, k) = m;
            for (int j = k + 1; j < n; ++j) A(i, j) -= m * A(k, j);
            b[i] -= m * b[k];
        }
    }
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

Vec spd_solve(const Mat& A, const Vec& b) {
    const int n = A.rows;
    Mat L(n, n);
    for (int j = 0; j < n; ++j) {
        double d = A(j, j);
        for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (d <= 0.0) return lu_solve(A, b);
        L(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / L(j, j);
        }
    }
    Vec y(n);
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= L(i, k) * y[k];
        y[i] = s / L(i, i);
    }
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n; ++k) s -= L(k, i) * x[k];
        x[i] = s / L(i, i);
    }
    return x;
}

SvdResult jacobi_svd(const Mat& A) {
    // One-sided Jacobi: rotate column pairs of W = A V until all pairs are
    // orthogonal; singular values are the final column norms.
    const int m = A.rows, n = A.cols;
    Mat W = A;
    Mat V = Mat::identity(n);
    const double eps = 1e-30;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += W(i, p) * W(i, p);
                    aqq += W(i, q) * W(i, q);
                    apq += W(i, p) * W(i, q);
                }
                off = std::max(off, std::abs(apq) / std::max(std::sqrt(app * aqq), eps));
                if (std::abs(apq) <= 1e-15 * std::sqrt(app * aqq) + 1e-280) continue;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < m; ++i) {
                    const double wp = W(i, p), wq = W(i, q);
                    W(i, p) = c * wp - s * wq;
                    W(i, q) = s * wp + c * wq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vp = V(i, p), vq = V(i, q);
                    V(i, p) = c * vp - s * vq;
                    V(i, q) = s * vp + c * vq;
                }
            }
        }
        if (off < 1e-15) break;
    }
    SvdResult r;
    r.sigma.resize(n);
    r.U = Mat(m, n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Vec sig(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += W(i, j) * W(i, j);
        sig[j] = std::sqrt(s);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] > sig[b]; });
    r.V = Mat(n, n);
    for (int jj = 0; jj < n; ++jj) {
        const int j = order[jj];
        r.sigma[jj] = sig[j];
        const double inv = sig[j] > 0.0 ? 1.0 / sig[j] : 0.0;
        for (int i = 0; i < m; ++i) r.U(i, jj) = W(i, j) * inv;
        for (int i = 0; i < n; ++i) r.V(i, jj) = V(i, j);
    }
    return r;
}

Mat orthonormal_columns(const Mat& A) {
    Mat Q = A;
    for (int j = 0; j < Q.cols; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                double c = 0.0;
                for (int i = 0; i < Q.rows; ++i) c += Q(i, k) * Q(i, j);
                for (int i = 0; i < Q.rows; ++i) Q(i, j) -= c * Q(i, k);
            }
        }
        double nrm = 0.0;
        for (int i = 0; i < Q.rows; ++i) nrm += Q(i, j) * Q(i, j);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-300) throw numeric_domain_error("orthonormal_columns: rank deficient");
        for (int i = 0; i < Q.rows; ++i) Q(i, j) /= nrm;
    }
    return Q;
}

double subspace_angle_sin(const Mat& X, const Mat& Y) {
    const Mat QX = orthonormal_columns(X);
    const Mat QY = orthonormal_columns(Y);
    // residual R = (I - QX QX^T) QY; sin(theta_max) = ||R||_2
    Mat R = QY;
    for (int j = 0; j < QY.cols; ++j)
        for (int k = 0; k < QX.cols; ++k) {
            double c = 0.0;
            for (int i = 0; i < QX.rows; ++i) c += QX(i, k) * QY(i, j);
            for (int i = 0; i < QX.rows; ++i) R(i, j) -= c * QX(i, k);
        }
    SvdResult s = jacobi_svd(R);
    return s.sigma.empty() ? 0.0 : std::min(1.0, s.sigma[0]);
}

} // namespace doi
