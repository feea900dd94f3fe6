#pragma once

#include "doi/linalg.hpp"
#include "doi/tensor4.hpp"

namespace doi {

/// Model parameters of the kinetic model.
struct ModelParams {
    int n = 3;           // dimension >= 2
    double alpha = 8.0;  // alignment interaction strength > 0
    double Lambda = 1.0; // molecular shape parameter in [-1, 1]
    double zeta = 0.5;   // polymer viscous coefficient >= 0
    double beta = 0.5;   // nonlocality moment >= 0

    void validate() const;
};

/// One point on the stable nematic branch.
struct EquilibriumPoint {
    double rho;
    double eta;
    double S2;
    double S4;
    double lambda; // leading Q-tensor eigenvalue, (n-1) eta / (n alpha rho)
};

/// Critical point of the branch: the onset density of nematic order.
struct CriticalPoint {
    double rho_star;
    double eta_star;
    double lambda_star;
};

/// Fourth-moment expansion coefficients of the Gibbs state.
struct ACoeffs {
    double a1, a2, a3;
};

/// Order parameters of the Gibbs state G_{eta A_Omega}.
double s2(double eta, int n);
double s4(double eta, int n);

/// dS2/deta by the covariance identity <P2 X^2> - <P2><X^2>.
double s2_prime(double eta, int n);

/// Density on the branch as a function of eta: rho = eta / (alpha S2(eta)).
double rho_of_eta(double eta, const ModelParams& params);

/// d rho / d eta along the branch.
double drho_deta(double eta, const ModelParams& params);

/// Onset of the nematic branch. For n = 2 the minimum sits at eta = 0 and is
/// evaluated by Richardson extrapolation; for n >= 3 it is the interior
/// minimizer of rho(eta), found by scan + golden-section refinement.
CriticalPoint critical_point(const ModelParams& params);

/// Largest root of eta = alpha rho S2(eta). Throws no_branch_error for
/// rho <= rho*.
double eta_of_rho(double rho, const ModelParams& params);

/// Full branch point at the given density.
EquilibriumPoint equilibrium_at(double rho, const ModelParams& params);

/// Branch eigenvalue as a function of eta: lambda = (n-1) S2(eta) / n.
double lambda_of_eta(double eta, int n);

ACoeffs a_coeffs(double eta, int n);

/// Fourth-order moment tensor T of the Gibbs state with axis Omega, and its
/// trace-free part Q4 = S4(eta) * A4(Omega).
struct FourthMoments {
    Tensor4 T;
    Tensor4 Q4;
};
FourthMoments fourth_moment_tensors(double eta, int n, const Vec& Omega);

/// The normalized uniaxial fourth-order tensor A4(Omega).
Tensor4 uniaxial_tensor4(const Vec& Omega);

/// A_Omega = Omega (x) Omega - Id/n.
Mat uniaxial_tensor2(const Vec& Omega);

} // namespace doi
