#include "doi/tensor4.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace doi {

Tensor4 operator+(const Tensor4& A, const Tensor4& B) {
    Tensor4 C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
    return C;
}

Tensor4 operator-(const Tensor4& A, const Tensor4& B) {
    Tensor4 C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
    return C;
}

Tensor4 operator*(double s, const Tensor4& A) {
    Tensor4 C = A;
    for (double& v : C.a) v *= s;
    return C;
}

Tensor4 symmetrize(const Tensor4& T) {
    static const std::array<std::array<int, 4>, 24> perms = [] {
        std::array<std::array<int, 4>, 24> p{};
        std::array<int, 4> idx{0, 1, 2, 3};
        int c = 0;
        do { p[c++] = idx; } while (std::next_permutation(idx.begin(), idx.end()));
        return p;
    }();
    const int n = T.n;
    Tensor4 S(n);
    std::array<int, 4> id{};
    for (id[0] = 0; id[0] < n; ++id[0])
        for (id[1] = 0; id[1] < n; ++id[1])
            for (id[2] = 0; id[2] < n; ++id[2])
                for (id[3] = 0; id[3] < n; ++id[3]) {
                    double s = 0.0;
                    for (const auto& p : perms)
                        s += T(id[p[0]], id[p[1]], id[p[2]], id[p[3]]);
                    S(id[0], id[1], id[2], id[3]) = s / 24.0;
                }
    return S;
}

Tensor4 outer4(const Vec& u) {
    const int n = static_cast<int>(u.size());
    Tensor4 T(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) T(i, j, k, l) = u[i] * u[j] * u[k] * u[l];
    return T;
}

Tensor4 outer_mm(const Mat& A, const Mat& B) {
    const int n = A.rows;
    Tensor4 T(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) T(i, j, k, l) = A(i, j) * B(k, l);
    return T;
}

Mat contract2(const Tensor4& T, const Mat& M) {
    const int n = T.n;
    Mat R(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += T(i, j, k, l) * M(k, l);
            R(i, j) = s;
        }
    return R;
}

Mat trace_pair(const Tensor4& T, int p, int q) {
    const int n = T.n;
    Mat R(n, n);
    std::array<int, 4> id{};
    int free[2], fi = 0;
    for (int pos = 0; pos < 4; ++pos)
        if (pos != p && pos != q) free[fi++] = pos;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                id[p] = k;
                id[q] = k;
                id[free[0]] = i;
                id[free[1]] = j;
                s += T(id[0], id[1], id[2], id[3]);
            }
            R(i, j) = s;
        }
    return R;
}

double contract4(const Tensor4& T, const Mat& M, const Mat& N) {
    const int n = T.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) s += T(i, j, k, l) * M(i, j) * N(k, l);
    return s;
}

double max_abs(const Tensor4& T) {
    double m = 0.0;
    for (double v : T.a) m = std::max(m, std::abs(v));
    return m;
}

} // namespace doi
