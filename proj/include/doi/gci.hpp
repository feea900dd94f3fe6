#pragma once

#include <functional>
#include <vector>

namespace doi {

/// Discrete solution of the radial two-point problem for the generalized
/// collision invariant profile h on (-1,1). The representation is a Galerkin
/// expansion in odd Chebyshev combinations r * T_{2j}(r); h is odd by
/// construction.
struct GciSolution {
    double eta = 0.0;
    int n = 0;
    int basis_size = 0;
    std::vector<double> coeff;
    double residual = 0.0;  // strong-form residual, relative, weighted L2
    double h_norm2_w = 0.0; // int (1-r^2)^((n-1)/2) h^2 dr  (times e^{eta(r^2-1)})
    double hp_norm2_w = 0.0;// int (1-r^2)^((n+1)/2) h'^2 dr (same scaling)

    double operator()(double r) const;
    double deriv(double r) const;
};

/// Galerkin solution of the weak form of the h-equation. basis_size = 0
/// selects the default.
GciSolution solve_h(double eta, int n, int basis_size = 0);

/// The angular companion g(theta) on [0,pi], solved independently in the
/// sine basis sin(2k theta); vanishes at both endpoints.
struct GFunction {
    double eta = 0.0;
    int n = 0;
    int basis_size = 0;
    std::vector<double> coeff; // coefficients of sin(2k theta), k = 1..K
    double residual = 0.0;

    double operator()(double theta) const;
    double deriv(double theta) const;
};

GFunction solve_g(double eta, int n, int basis_size = 0);

/// First-order reduction available at n = 2:
/// g(theta) = theta + C int_0^theta exp(-(eta/2) cos 2phi) dphi, g(pi) = 0,
/// mapped back to h(r) = -g(acos r) / (2 eta sqrt(1-r^2)).
struct ClosedFormN2 {
    double eta;
    double C;
    double h(double r) const;
    double g(double theta) const;
};
ClosedFormN2 h_closed_form_n2(double eta);

/// Angular-momenta of the GCI profile entering the director equation.
struct GammaTildes {
    double g1, g2, g3;
    double rho, eta;
};
GammaTildes gamma_tildes(double eta, int n, double rho, const GciSolution& h);

/// Rotational mobility constant; requires Lambda != 0.
double constant_c(double eta, int n, double Lambda, const GciSolution& h);

/// The Lambda-independent mobility of the Lambda = 0 director equation;
/// equals c / Lambda for any Lambda != 0.
double constant_c_lambda0(double eta, int n, const GciSolution& h);

/// Default Galerkin basis size.
inline constexpr int default_gci_basis = 64;

} // namespace doi
