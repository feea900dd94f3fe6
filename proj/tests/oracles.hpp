#pragma once

// Test-side oracles, deliberately independent of the library's quadrature
// path: interval-bisection refinement over fixed 10-point Gauss-Legendre
// panels, plus finite-difference and Richardson helpers.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// 10-point Gauss-Legendre on [a,b].
inline double gl10(const std::function<double(double)>& f, double a, double b) {
    static const double x[5] = {0.1488743389816312, 0.4333953941292472,
                                0.6794095682990244, 0.8650633666889845,
                                0.9739065285171717};
    static const double w[5] = {0.2955242247147529, 0.2692667193099963,
                                0.2190863625159820, 0.1494513491505806,
                                0.0666713443086881};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
    return h * s;
}

/// Adaptive refinement by interval bisection until the panel sum stabilizes.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13, int depth = 0) {
    const double whole = gl10(f, a, b);
    const double mid = 0.5 * (a + b);
    const double split = gl10(f, a, mid) + gl10(f, mid, b);
    if (depth >= 40 || std::abs(whole - split) <= tol) return split;
    return integrate(f, a, mid, 0.5 * tol, depth + 1) +
           integrate(f, mid, b, 0.5 * tol, depth + 1);
}

/// Gibbs average over the axisymmetric sphere measure, computed in the polar
/// angle where the weight sin^{n-2}(theta) is smooth for every n >= 2.
inline double gibbs_average(const std::function<double(double)>& k, double eta, int n,
                            double tol = 1e-13) {
    const double pi = 3.14159265358979323846;
    auto weight = [=](double th) {
        return std::exp(eta * (std::cos(th) * std::cos(th) - 1.0)) *
               std::pow(std::sin(th), n - 2.0);
    };
    const double num =
        integrate([&](double th) { return k(std::cos(th)) * weight(th); }, 0.0, pi, tol);
    const double den = integrate(weight, 0.0, pi, tol);
    return num / den;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Extrapolate f(h), f(h/2), f(h/4) assuming error c1 h + c2 h^2 + ...
inline double richardson3(double a1, double a2, double a3) {
    const double b1 = 2.0 * a2 - a1;
    const double b2 = 2.0 * a3 - a2;
    return (4.0 * b2 - b1) / 3.0;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(unsigned long long seed) : gen(seed) {}
    double uniform(double a = -1.0, double b = 1.0) {
        return a + (b - a) * (static_cast<double>(gen()) / 18446744073709551616.0);
    }
    std::vector<double> unit_vector(int n) {
        std::vector<double> v(n);
        double s2 = 0.0;
        do {
            s2 = 0.0;
            for (double& x : v) {
                x = uniform();
                s2 += x * x;
            }
        } while (s2 < 1e-6);
        const double s = std::sqrt(s2);
        for (double& x : v) x /= s;
        return v;
    }
};

} // namespace oracle
