#pragma once

#include "doi/linalg.hpp"

namespace doi {

/// Dense fully-indexed fourth-order tensor on R^n, n <= 8.
struct Tensor4 {
    int n = 0;
    std::vector<double> a; // index (i,j,k,l) row-major

    Tensor4() = default;
    explicit Tensor4(int n_) : n(n_), a(static_cast<size_t>(n_) * n_ * n_ * n_, 0.0) {}

    double& operator()(int i, int j, int k, int l) {
        return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
    }
};

Tensor4 operator+(const Tensor4& A, const Tensor4& B);
Tensor4 operator-(const Tensor4& A, const Tensor4& B);
Tensor4 operator*(double s, const Tensor4& A);

/// Average over all 24 index permutations.
Tensor4 symmetrize(const Tensor4& T);

/// Outer products, not symmetrized.
Tensor4 outer4(const Vec& u);                    // u (x) u (x) u (x) u
Tensor4 outer_mm(const Mat& A, const Mat& B);    // A (x) B

/// (T : M)_{ij} = T_{ijkl} M_{kl}.
Mat contract2(const Tensor4& T, const Mat& M);

/// Contraction over one index pair, e.g. pair (2,3): sum_k T_{i k k j}.
/// Pairs are given as positions in {0,1,2,3}.
Mat trace_pair(const Tensor4& T, int p, int q);

/// T : (M (x) N) over all four indices.
double contract4(const Tensor4& T, const Mat& M, const Mat& N);

double max_abs(const Tensor4& T);

} // namespace doi
