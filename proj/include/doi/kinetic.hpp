#pragma once

#include "doi/equilibria.hpp"
#include "doi/gci.hpp"
#include "doi/linalg.hpp"

#include <complex>
#include <vector>

namespace doi {

/// Head-tail symmetric orientation distribution on the circle, stored as the
/// even Fourier modes f(phi) = sum_{|k|<=K} fhat_{2k} e^{i 2k phi} with
/// fhat_{-2k} = conj(fhat_{2k}). Odd harmonics are structurally absent.
struct OrientationState {
    int K = 0;
    std::vector<std::complex<double>> c; // c[k] = fhat_{2k}, k = 0..K
    double time = 0.0;

    double rho() const { return c[0].real(); }
    double value(double phi) const;
    /// Minimum of the reconstruction over a uniform grid of 4K points.
    double min_value() const;
};

OrientationState uniform_state(double rho, int K);
/// Projection of rho * G_{eta A_Omega} with director angle theta0.
OrientationState gibbs_state(double rho, double eta, double theta0, int K);

/// Moments of the distribution; throws degenerate_moment_error when Q = 0.
struct Moments {
    double rho;
    Mat Q;         // 2x2 trace-free symmetric
    double lambda; // leading eigenvalue of Q
    Vec Omega;     // canonical director
    double theta;  // director angle in (-pi/2, pi/2]
    Mat Sigma;     // normalized Q-tensor, leading eigenvalue 1/2
    double eta_f;  // alpha rho n/(n-1) lambda = alpha |fhat_2|
    double chi;    // order parameter 2 lambda
};
Moments moments(const OrientationState& state, double alpha);

/// Alignment-diffusion rate on the modes. The quadratic term couples only
/// through the +-2 modes, so the convolution is evaluated exactly:
///   rate_k = -4 k^2 c_k + alpha k (c_1 c_{k-1} - conj(c_1) c_{k+1}).
/// extend = 1 keeps the K+1 overflow mode instead of truncating it.
std::vector<std::complex<double>> collision(const OrientationState& state, double alpha,
                                            int extend = 0);

/// Rotation/strain transport rate -div_omega(f (Lambda P E - W) omega).
std::vector<std::complex<double>> transport(const OrientationState& state,
                                            const Mat& gradu, double Lambda);

/// Free energy A0 = int (f log f - f + U0 f / 2) domega and its dissipation
/// int f |d_phi mu0|^2 domega.
struct FreeEnergy {
    double A0;
    double dissipation;
};
FreeEnergy free_energy(const OrientationState& state, double alpha);

/// Relative residual |int C(f) psi domega| / (||C(f)|| ||psi||) with the
/// invariant psi built at the state's own moments (eta_f, Omega_f); an
/// override eta probes mismatched invariants.
double gci_residual(const OrientationState& state, double alpha, int gci_basis = 0,
                    double eta_override = -1.0);

enum class Integrator { etd_midpoint, etd_euler };

struct SimConfig {
    ModelParams params;   // n is fixed to 2
    double eps = 1e-3;    // Deborah number
    Mat gradu;            // 2x2 trace-free velocity gradient
    double dt = 0.0;      // 0 selects min(eps/4, 1e-3)
    double tmax = 1.0;
    int output_every = 0; // steps between records; 0 picks ~400 records
    Integrator integrator = Integrator::etd_midpoint;
    bool with_free_energy = true;

    void validate() const;
};

struct TrajectoryPoint {
    double t;
    OrientationState state;
    Moments mom;
    double A0;
    double dissipation;
    double min_f;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    bool positivity_ok = true;
};

/// Integrate d/dt f = -transport + (1/eps) C(f) from the initial state. The
/// stiff mode-diagonal diffusion is applied by exact exponentials; the rest
/// by the chosen explicit rule. Mass is conserved identically.
Trajectory simulate(const OrientationState& initial, const SimConfig& config);

/// The two evaluations of the scaled extra-stress (local-potential form):
/// direct from the chemical-potential moment, and via the Q-tensor balance
/// with a supplied dQ/dt estimate.
struct KineticStress {
    Mat direct;           // n Lambda rho Q + mixed potential moment
    Mat from_moments;     // eps Lambda/2 rho [ ... - dQ/dt ] + antisymmetric part
    Mat potential_moment; // int omega (x) grad_omega U0 f domega (symmetric)
};
KineticStress kinetic_stress(const OrientationState& state, const Mat& gradu,
                             double Lambda, double alpha, double eps, const Mat& dQdt);

/// Matrix of the adjoint linearized alignment operator about the Gibbs state
/// rho G_{eta A_Omega}, on the real even-harmonic basis
/// {1, cos 2phi, sin 2phi, ..., cos 2K phi, sin 2K phi} (size 2K+1).
Mat adjoint_linearized_matrix(double rho, double eta, double theta0, double alpha,
                              int K);

/// Singular-value analysis of the adjoint matrix: numerical kernel (threshold
/// 1e-8 of the largest singular value, gap ratio >= 1e3 enforced), and angles
/// to the invariant pair {1, h(cos(phi-theta0)) sin(phi-theta0)}.
struct KernelReport {
    std::vector<double> sigma; // descending
    int kernel_dim;
    double gap_ratio;
    double angle_pair_sin; // span{1, psi} vs numerical kernel
    double angle_gci_sin;  // psi alone vs numerical kernel
};
KernelReport adjoint_kernel_report(double rho, double eta, double theta0, double alpha,
                                   int K, int gci_basis = 0);

} // namespace doi
