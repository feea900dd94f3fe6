#pragma once

#include "doi/equilibria.hpp"
#include "doi/gci.hpp"
#include "doi/linalg.hpp"

#include <optional>

namespace doi {

/// The full transport-coefficient set of the director-stress model at one
/// point of the nematic branch.
struct LeslieCoefficients {
    double c;
    double a1, a2, a3, a4, a5, a6; // Leslie viscosities alpha_1..alpha_6
    double gamma1, gamma2;
    // context
    ModelParams params;
    double rho, eta, S2, S4;
};

/// Coefficients at a given density on the stable branch (rho > rho*).
LeslieCoefficients leslie_coefficients(const ModelParams& params, double rho,
                                       int gci_basis = 0);

/// Coefficient assembly at a prescribed eta (rho taken as eta/(alpha S2));
/// used by grid sweeps that parametrize the branch by eta directly.
LeslieCoefficients leslie_coefficients_at_eta(const ModelParams& params, double eta,
                                              int gci_basis = 0);

/// Same assembly from precomputed (S2, S4, c); exposes the purely algebraic
/// part for testing.
LeslieCoefficients assemble_leslie(const ModelParams& params, double rho, double eta,
                                   double S2, double S4, double c);

/// Pointwise hydrodynamic data at a material point.
struct FlowPoint {
    Mat E;                  // symmetric trace-free strain rate
    Mat W;                  // antisymmetric vorticity
    Vec Omega;              // unit director
    Vec H;                  // molecular field
    std::optional<Vec> N;   // co-rotational director rate, perpendicular to Omega

    void validate() const;
};

/// N from the director-balance relation N = (1/gamma1) P_perp (H - gamma2 E Omega).
Vec derive_corotational_rate(const LeslieCoefficients& coeffs, const FlowPoint& fp);

/// Viscous director stress sigma_L (includes the density prefactor).
Mat leslie_stress(const LeslieCoefficients& coeffs, double rho, const FlowPoint& fp);

/// Spatial first/second derivative data at a material point.
struct FieldJet {
    double rho = 0.0, eta = 0.0;
    Vec grad_rho, grad_eta;  // spatial gradients
    Vec Omega;               // unit director
    Mat grad_Omega;          // (i,j) = d_i Omega_j; rows perpendicular to Omega
    Vec lap_eta_Omega;       // Laplacian of eta*Omega
    double lap_rho = 0.0, lap_eta = 0.0;
    bool on_branch = false;

    void validate() const;
};

/// Elastic stress from director and density gradients.
Mat ericksen_stress(const ModelParams& params, const FieldJet& jet);

/// Equivalent single-gradient form valid on the branch:
/// -(2 beta/alpha) eta^2 grad(Omega) grad(Omega)^T
/// - (n-1) beta/(n alpha) [1 - (1/S2^2)(1 - eta S2'/S2)^2] grad(eta) (x) grad(eta).
Mat ericksen_stress_alternate(const ModelParams& params, const FieldJet& jet);

/// Molecular field H = 2 beta S2(eta) Lap(eta Omega).
Vec molecular_field(const ModelParams& params, const FieldJet& jet);

/// Periodic 1-D director/density field and its distortion energy.
struct PeriodicField {
    double length = 1.0;          // domain length; uniform grid
    std::vector<double> rho;      // > rho* everywhere
    std::vector<Vec> Omega;       // unit directors
};

struct FranckEnergy {
    double total;
    double part_Omega, part_rho, part_eta;
    bool positivity_flag; // pointwise criterion 1 - (1/S2^2)(1 - eta S2'/S2)^2 >= 0
};

FranckEnergy franck_energy(const ModelParams& params, const PeriodicField& field);

/// Pointwise jets of a periodic field (second-order centered stencils whose
/// discrete adjoint matches the energy above exactly).
std::vector<FieldJet> field_jets(const ModelParams& params, const PeriodicField& field);

/// Local dissipation density of the director-stress model and a sampled
/// positive-semidefiniteness verdict of its quadratic form in (E, P_perp H).
struct DissipationResult {
    double value;
    bool scan_positive;
    double scan_min;
};
DissipationResult dissipation_density(const LeslieCoefficients& coeffs, double rho,
                                      const FlowPoint& fp, int scan_samples = 200,
                                      unsigned long long seed = 2024);

/// Homogeneous director rate: -W Omega + c P_perp(E Omega + (2 beta/Lambda) lap),
/// the spatial term entering only when lap_eta_Omega is supplied.
Vec director_rhs(const LeslieCoefficients& coeffs, const ModelParams& params,
                 const Vec& Omega, const Mat& E, const Mat& W,
                 const std::optional<Vec>& lap_eta_Omega = std::nullopt);

/// Representative of {Omega, -Omega} with the first nonzero coordinate positive.
Vec canonical_director(Vec Omega);

} // namespace doi
