#include "doi/leslie.hpp"
#include "doi/errors.hpp"
#include "doi/quadrature.hpp"

#include <cmath>
#include <random>
#include <string>

namespace doi {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw invalid_parameter(msg);
}

} // namespace

LeslieCoefficients assemble_leslie(const ModelParams& params, double rho, double eta,
                                   double S2, double S4, double c) {
    const int n = params.n;
    const double L = params.Lambda;
    const double z = params.zeta;
    const double zl = z - L * L;

    LeslieCoefficients k;
    k.params = params;
    k.rho = rho;
    k.eta = eta;
    k.S2 = S2;
    k.S4 = S4;
    k.c = c;
    k.a1 = zl * S4;
    k.a2 = -0.5 * L * S2 * (1.0 / c + 1.0);
    k.a3 = 0.5 * L * S2 * (1.0 / c - 1.0);
    k.a4 = 2.0 * zl * S4 / ((n + 2.0) * (n + 4.0)) -
           (2.0 / n) * (0.5 * L * L + 2.0 * zl / (n + 4.0)) * S2 +
           (1.0 / n) * (L * L + 2.0 * zl / (n + 2.0));
    k.a5 = -2.0 * zl * S4 / (n + 4.0) + (0.5 * L + 0.5 * L * L + 2.0 * zl / (n + 4.0)) * S2;
    k.a6 = -2.0 * zl * S4 / (n + 4.0) + (-0.5 * L + 0.5 * L * L + 2.0 * zl / (n + 4.0)) * S2;
    k.gamma1 = L * S2 / c;
    k.gamma2 = -L * S2;
    return k;
}

LeslieCoefficients leslie_coefficients_at_eta(const ModelParams& params, double eta,
                                              int gci_basis) {
    params.validate();
    if (params.Lambda == 0.0)
        throw lambda_zero_error(
            "leslie_coefficients: Lambda = 0 leaves the mobility undefined; "
            "use constant_c_lambda0 and the Lambda = 0 director equation");
    if (!(eta > 0.0)) throw invalid_parameter("leslie_coefficients: eta must be positive");
    const int n = params.n;
    const double S2 = s2(eta, n);
    const double S4 = s4(eta, n);
    const double rho = eta / (params.alpha * S2);
    const GciSolution h = solve_h(eta, n, gci_basis);
    const double c = constant_c(eta, n, params.Lambda, h);
    return assemble_leslie(params, rho, eta, S2, S4, c);
}

LeslieCoefficients leslie_coefficients(const ModelParams& params, double rho,
                                       int gci_basis) {
    params.validate();
    if (params.Lambda == 0.0)
        throw lambda_zero_error(
            "leslie_coefficients: Lambda = 0 leaves the mobility undefined; "
            "use constant_c_lambda0 and the Lambda = 0 director equation");
    const double eta = eta_of_rho(rho, params); // throws no_branch_error below rho*
    LeslieCoefficients k = leslie_coefficients_at_eta(params, eta, gci_basis);
    k.rho = rho;
    return k;
}

void FlowPoint::validate() const {
    const int n = static_cast<int>(Omega.size());
    require(E.rows == n && E.cols == n && W.rows == n && W.cols == n,
            "FlowPoint: dimension mismatch");
    const double scale = std::max(1.0, frobenius_norm(E));
    require(std::abs(trace(E)) <= 1e-12 * scale, "FlowPoint: E must be trace free");
    require(frobenius_norm(E - transpose(E)) <= 1e-12 * scale,
            "FlowPoint: E must be symmetric");
    require(frobenius_norm(W + transpose(W)) <= 1e-12 * std::max(1.0, frobenius_norm(W)),
            "FlowPoint: W must be antisymmetric");
    require(std::abs(norm(Omega) - 1.0) <= 1e-12, "FlowPoint: Omega must be unit");
    if (N) {
        require(static_cast<int>(N->size()) == n, "FlowPoint: N dimension mismatch");
        require(std::abs(dot(*N, Omega)) <= 1e-12 * std::max(1.0, norm(*N)),
                "FlowPoint: N must be perpendicular to Omega");
    }
}

Vec derive_corotational_rate(const LeslieCoefficients& coeffs, const FlowPoint& fp) {
    if (coeffs.gamma1 == 0.0)
        throw singular_coefficient_error("derive_corotational_rate: gamma1 = 0");
    const Vec EOm = fp.E * fp.Omega;
    Vec v = fp.H;
    for (size_t i = 0; i < v.size(); ++i) v[i] -= coeffs.gamma2 * EOm[i];
    return (1.0 / coeffs.gamma1) * project_perp(fp.Omega, v);
}

Mat leslie_stress(const LeslieCoefficients& coeffs, double rho, const FlowPoint& fp) {
    fp.validate();
    const Vec N = fp.N ? *fp.N : derive_corotational_rate(coeffs, fp);
    const Mat OO = outer(fp.Omega, fp.Omega);
    const double EOO = frobenius_inner(fp.E, OO);
    Mat s = coeffs.a1 * EOO * OO;
    s = s + coeffs.a2 * outer(fp.Omega, N) + coeffs.a3 * outer(N, fp.Omega);
    s = s + coeffs.a4 * fp.E;
    s = s + coeffs.a5 * (OO * fp.E) + coeffs.a6 * (fp.E * OO);
    return rho * s;
}

void FieldJet::validate() const {
    const int n = static_cast<int>(Omega.size());
    require(std::abs(norm(Omega) - 1.0) <= 1e-12, "FieldJet: Omega must be unit");
    require(grad_Omega.rows == n && grad_Omega.cols == n, "FieldJet: grad_Omega shape");
    for (int i = 0; i < n; ++i) {
        double row_dot = 0.0, row_norm = 0.0;
        for (int j = 0; j < n; ++j) {
            row_dot += grad_Omega(i, j) * Omega[j];
            row_norm += grad_Omega(i, j) * grad_Omega(i, j);
        }
        require(std::abs(row_dot) <= 1e-12 * std::max(1.0, std::sqrt(row_norm)),
                "FieldJet: rows of grad_Omega must be perpendicular to Omega");
    }
}

Mat ericksen_stress(const ModelParams& params, const FieldJet& jet) {
    jet.validate();
    const int n = params.n;
    // G_{ij} = d_i (eta Omega_j)
    Mat G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G(i, j) = jet.grad_eta[i] * jet.Omega[j] + jet.eta * jet.grad_Omega(i, j);
    Mat s = (-2.0 * params.beta / params.alpha) * (G * transpose(G));
    s = s + ((n + 1.0) * params.beta / (n * params.alpha)) * outer(jet.grad_eta, jet.grad_eta);
    s = s + ((n - 1.0) * params.alpha * params.beta / n) * outer(jet.grad_rho, jet.grad_rho);
    return s;
}

Mat ericksen_stress_alternate(const ModelParams& params, const FieldJet& jet) {
    jet.validate();
    if (!jet.on_branch)
        throw invalid_parameter("ericksen_stress_alternate: jet must be on-branch");
    const int n = params.n;
    const double S2 = s2(jet.eta, n);
    const double S2p = s2_prime(jet.eta, n);
    const double q = 1.0 - jet.eta * S2p / S2;
    const double coeff_eta =
        -(n - 1.0) * params.beta / (n * params.alpha) * (1.0 - q * q / (S2 * S2));
    Mat s = (-2.0 * params.beta / params.alpha * jet.eta * jet.eta) *
            (jet.grad_Omega * transpose(jet.grad_Omega));
    s = s + coeff_eta * outer(jet.grad_eta, jet.grad_eta);
    return s;
}

Vec molecular_field(const ModelParams& params, const FieldJet& jet) {
    const double S2 = s2(jet.eta, params.n);
    return (2.0 * params.beta * S2) * jet.lap_eta_Omega;
}

namespace {

struct BranchTable {
    std::vector<double> eta, S2v;
};

BranchTable branch_lookup(const ModelParams& params, const std::vector<double>& rho) {
    BranchTable t;
    t.eta.reserve(rho.size());
    t.S2v.reserve(rho.size());
    for (double r : rho) {
        const double e = eta_of_rho(r, params);
        t.eta.push_back(e);
        t.S2v.push_back(s2(e, params.n));
    }
    return t;
}

} // namespace

FranckEnergy franck_energy(const ModelParams& params, const PeriodicField& field) {
    params.validate();
    const int M = static_cast<int>(field.rho.size());
    require(M >= 3 && static_cast<int>(field.Omega.size()) == M,
            "franck_energy: need matching rho/Omega grids with >= 3 points");
    const int n = params.n;
    const double dx = field.length / M;

    const BranchTable branch = branch_lookup(params, field.rho);

    // forward-difference energies on the periodic grid
    double eOm = 0.0, eRho = 0.0, eEta = 0.0;
    bool positive = true;
    for (int mth = 0; mth < M; ++mth) {
        const int mp = (mth + 1) % M;
        double d2 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d =
                (branch.eta[mp] * field.Omega[mp][j] - branch.eta[mth] * field.Omega[mth][j]) / dx;
            d2 += d * d;
        }
        eOm += 0.5 * d2 * dx;
        const double drho = (field.rho[mp] - field.rho[mth]) / dx;
        eRho += 0.5 * drho * drho * dx;
        const double deta = (branch.eta[mp] - branch.eta[mth]) / dx;
        eEta += 0.5 * deta * deta * dx;

        const double S2 = branch.S2v[mth];
        const double S2p = s2_prime(branch.eta[mth], n);
        const double q = 1.0 - branch.eta[mth] * S2p / S2;
        if (1.0 - q * q / (S2 * S2) < 0.0) positive = false;
    }
    FranckEnergy e;
    e.part_Omega = 2.0 * params.beta / params.alpha * eOm;
    e.part_rho = -params.alpha * params.beta * (n - 1.0) / n * eRho;
    e.part_eta = -params.beta * (n + 1.0) / (n * params.alpha) * eEta;
    e.total = e.part_Omega + e.part_rho + e.part_eta;
    e.positivity_flag = positive;
    return e;
}

std::vector<FieldJet> field_jets(const ModelParams& params, const PeriodicField& field) {
    params.validate();
    const int M = static_cast<int>(field.rho.size());
    require(M >= 3 && static_cast<int>(field.Omega.size()) == M,
            "field_jets: need matching rho/Omega grids with >= 3 points");
    const int n = params.n;
    const double dx = field.length / M;

    const BranchTable branch = branch_lookup(params, field.rho);

    std::vector<FieldJet> jets(M);
    for (int mth = 0; mth < M; ++mth) {
        const int mp = (mth + 1) % M;
        const int mm = (mth + M - 1) % M;
        FieldJet& J = jets[mth];
        J.rho = field.rho[mth];
        J.eta = branch.eta[mth];
        J.on_branch = true;
        J.Omega = field.Omega[mth];
        J.grad_rho.assign(n, 0.0);
        J.grad_eta.assign(n, 0.0);
        J.grad_rho[0] = (field.rho[mp] - field.rho[mm]) / (2.0 * dx);
        J.grad_eta[0] = (branch.eta[mp] - branch.eta[mm]) / (2.0 * dx);
        J.grad_Omega = Mat(n, n);
        J.lap_eta_Omega.assign(n, 0.0);
        for (int j = 0; j < n; ++j) {
            // centered first derivative, tangentially projected
            J.grad_Omega(0, j) = (field.Omega[mp][j] - field.Omega[mm][j]) / (2.0 * dx);
            // compact Laplacian of eta*Omega: the discrete adjoint of the
            // forward-difference energy above
            J.lap_eta_Omega[j] = (branch.eta[mp] * field.Omega[mp][j] -
                                  2.0 * branch.eta[mth] * field.Omega[mth][j] +
                                  branch.eta[mm] * field.Omega[mm][j]) /
                                 (dx * dx);
        }
        // project the derivative row onto the tangent space of the director
        double d = 0.0;
        for (int j = 0; j < n; ++j) d += J.grad_Omega(0, j) * J.Omega[j];
        for (int j = 0; j < n; ++j) J.grad_Omega(0, j) -= d * J.Omega[j];
        J.lap_rho = (field.rho[mp] - 2.0 * field.rho[mth] + field.rho[mm]) / (dx * dx);
        J.lap_eta = (branch.eta[mp] - 2.0 * branch.eta[mth] + branch.eta[mm]) / (dx * dx);
    }
    return jets;
}

DissipationResult dissipation_density(const LeslieCoefficients& coeffs, double rho,
                                      const FlowPoint& fp, int scan_samples,
                                      unsigned long long seed) {
    fp.validate();
    if (coeffs.gamma1 == 0.0)
        throw singular_coefficient_error("dissipation_density: gamma1 = 0");
    const int n = static_cast<int>(fp.Omega.size());
    const Mat OO = outer(fp.Omega, fp.Omega);

    auto density = [&](const Mat& E, const Vec& H) {
        const double EOO = frobenius_inner(E, OO);
        const Vec EOm = E * fp.Omega;
        const Vec Hp = project_perp(fp.Omega, H);
        return rho * ((coeffs.a1 + coeffs.gamma2 * coeffs.gamma2 / coeffs.gamma1) * EOO * EOO +
                      coeffs.a4 * frobenius_inner(E, E) +
                      (coeffs.a5 + coeffs.a6 - coeffs.gamma2 * coeffs.gamma2 / coeffs.gamma1) *
                          dot(EOm, EOm) +
                      (1.0 / coeffs.gamma1) * dot(Hp, Hp));
    };

    DissipationResult out;
    out.value = density(fp.E, fp.H);

    std::mt19937_64 gen(seed);
    auto uni = [&gen]() {
        return 2.0 * (static_cast<double>(gen()) / 18446744073709551616.0) - 1.0;
    };
    double mn = 0.0;
    for (int s = 0; s < scan_samples; ++s) {
        Mat E(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) E(i, j) = E(j, i) = uni();
        const double t = trace(E) / n;
        for (int i = 0; i < n; ++i) E(i, i) -= t;
        Vec H(n);
        for (int i = 0; i < n; ++i) H[i] = uni();
        mn = std::min(mn, density(E, H));
    }
    out.scan_min = mn;
    out.scan_positive = mn >= -1e-12;
    return out;
}

Vec director_rhs(const LeslieCoefficients& coeffs, const ModelParams& params,
                 const Vec& Omega, const Mat& E, const Mat& W,
                 const std::optional<Vec>& lap_eta_Omega) {
    require(std::abs(norm(Omega) - 1.0) <= 1e-12, "director_rhs: Omega must be unit");
    Vec drive = E * Omega;
    if (lap_eta_Omega) {
        if (params.Lambda == 0.0)
            throw singular_coefficient_error(
                "director_rhs: spatial term requires Lambda != 0");
        const double k = 2.0 * params.beta / params.Lambda;
        for (size_t i = 0; i < drive.size(); ++i) drive[i] += k * (*lap_eta_Omega)[i];
    }
    Vec out = coeffs.c * project_perp(Omega, drive);
    const Vec WOm = W * Omega;
    for (size_t i = 0; i < out.size(); ++i) out[i] -= WOm[i];
    return out;
}

Vec canonical_director(Vec Omega) {
    for (double x : Omega) {
        if (std::abs(x) > 1e-14) {
            if (x < 0.0)
                for (double& v : Omega) v = -v;
            break;
        }
    }
    return Omega;
}

} // namespace doi
