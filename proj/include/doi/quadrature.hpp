#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace doi {

/// Gauss-Jacobi rule for the weight (1-r^2)^((n-3)/2) on (-1,1), i.e. the
/// one-dimensional reduction of the axisymmetric measure on S^{n-1}.
/// Nodes come in exact +/- pairs; an odd node count places one node at 0.
struct QuadratureRule {
    int n = 0;                  // ambient sphere dimension (>= 2)
    int m = 0;                  // node count
    std::vector<double> nodes;  // ascending in (-1,1)
    std::vector<double> weights;

    double weight_mass() const; // sum of weights = int (1-r^2)^((n-3)/2) dr
};

/// Build the m-point rule for dimension n. Deterministic in (n, m).
QuadratureRule build_rule(int n, int m);

/// Exact value of int_{-1}^{1} (1-r^2)^((n-3)/2) dr.
double weight_mass_exact(int n);

/// <k(r)>_{Gibbs} = int k(r) e^{eta r^2} w(r) dr / int e^{eta r^2} w(r) dr,
/// w(r) = (1-r^2)^((n-3)/2). The exponential is rescaled by e^{-eta}
/// internally, so large eta does not overflow.
double axisymmetric_average(const std::function<double(double)>& k, double eta,
                            const QuadratureRule& rule);

/// Integral against the Gibbs-weighted measure without normalization, with
/// the e^{eta} factor removed: int k(r) e^{eta(r^2-1)} w(r) dr.
double gibbs_weighted_integral(const std::function<double(double)>& k, double eta,
                               const QuadratureRule& rule);

/// Radial interaction kernel K(|x|) on R^n, normalized to unit mass.
struct RadialKernel {
    std::function<double(double)> k; // xi >= 0 -> K(xi) >= 0
    double support;                  // truncation radius; infinity allowed
    int n;                           // ambient dimension
};

RadialKernel gaussian_kernel(int n, double sigma = 1.0);
RadialKernel ball_kernel(int n, double radius = 1.0);
/// K_R(xi) = R^{-n} K(xi/R); unit mass is preserved.
RadialKernel rescaled_kernel(const RadialKernel& kernel, double R);

/// beta = 1/(2n) * int_{R^n} K(|x|) |x|^2 dx, by adaptive radial quadrature.
/// Checks the unit-mass normalization to relative 1e-8 first.
double kernel_beta(const RadialKernel& kernel);

/// Adaptive Simpson integration with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

/// Surface area of the unit sphere S^{n-1}.
double sphere_surface(int n);

/// Shared, memoized rules keyed by (n, m).
std::shared_ptr<const QuadratureRule> cached_rule(int n, int m);

/// Default node count used by the higher modules.
inline constexpr int default_nodes = 128;

/// Node count adequate for Gibbs factors up to the given eta.
int nodes_for(double eta, int base = default_nodes);

} // namespace doi
