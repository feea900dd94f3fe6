#include "doi/kinetic.hpp"
#include "doi/errors.hpp"
#include "doi/leslie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace doi {

namespace {

constexpr double pi = 3.14159265358979323846;
using cplx = std::complex<double>;

cplx mode(const OrientationState& s, int k) {
    // fhat_{2k} with the reality convention for k < 0
    if (k >= 0) return k <= s.K ? s.c[k] : cplx(0.0, 0.0);
    return -k <= s.K ? std::conj(s.c[-k]) : cplx(0.0, 0.0);
}

/// Evaluate f and d_phi f on a uniform grid of M angles.
void grid_values(const OrientationState& s, int M, std::vector<double>* f,
                 std::vector<double>* dphi_f) {
    if (f) f->assign(M, 0.0);
    if (dphi_f) dphi_f->assign(M, 0.0);
    for (int q = 0; q < M; ++q) {
        const double phi = 2.0 * pi * q / M;
        double v = s.c[0].real();
        double dv = 0.0;
        for (int k = 1; k <= s.K; ++k) {
            const cplx e(std::cos(2.0 * k * phi), std::sin(2.0 * k * phi));
            v += 2.0 * (s.c[k] * e).real();
            dv += 2.0 * (cplx(0.0, 2.0 * k) * s.c[k] * e).real();
        }
        if (f) (*f)[q] = v;
        if (dphi_f) (*dphi_f)[q] = dv;
    }
}

void check_tracefree(const Mat& gradu) {
    if (gradu.rows != 2 || gradu.cols != 2)
        throw invalid_parameter("kinetic: velocity gradient must be 2x2");
    if (std::abs(trace(gradu)) > 1e-12 * std::max(1.0, frobenius_norm(gradu)))
        throw invalid_parameter("kinetic: velocity gradient must be trace free");
}

} // namespace

double OrientationState::value(double phi) const {
    double v = c[0].real();
    for (int k = 1; k <= K; ++k) {
        const cplx e(std::cos(2.0 * k * phi), std::sin(2.0 * k * phi));
        v += 2.0 * (c[k] * e).real();
    }
    return v;
}

double OrientationState::min_value() const {
    const int M = std::max(64, 4 * K);
    double mn = value(0.0);
    for (int q = 1; q < M; ++q) mn = std::min(mn, value(2.0 * pi * q / M));
    return mn;
}

OrientationState uniform_state(double rho, int K) {
    if (!(rho > 0.0)) throw invalid_parameter("uniform_state: rho must be positive");
    if (K < 1) throw invalid_parameter("uniform_state: K must be >= 1");
    OrientationState s;
    s.K = K;
    s.c.assign(K + 1, cplx(0.0, 0.0));
    s.c[0] = rho;
    return s;
}

OrientationState gibbs_state(double rho, double eta, double theta0, int K) {
    if (!(rho > 0.0)) throw invalid_parameter("gibbs_state: rho must be positive");
    if (!(eta >= 0.0)) throw invalid_parameter("gibbs_state: eta must be >= 0");
    OrientationState s = uniform_state(rho, K);
    const double z = 0.5 * eta;
    if (z == 0.0) return s;
    const double i0 = std::cyl_bessel_i(0.0, z);
    for (int k = 1; k <= K; ++k) {
        const double ratio = std::cyl_bessel_i(static_cast<double>(k), z) / i0;
        s.c[k] = rho * ratio * cplx(std::cos(2.0 * k * theta0), -std::sin(2.0 * k * theta0));
    }
    return s;
}

Moments moments(const OrientationState& state, double alpha) {
    Moments m;
    m.rho = state.rho();
    const cplx c1 = state.K >= 1 ? state.c[1] : cplx(0.0, 0.0);
    m.Q = Mat(2, 2);
    m.Q(0, 0) = 0.5 * c1.real() / m.rho;
    m.Q(0, 1) = m.Q(1, 0) = -0.5 * c1.imag() / m.rho;
    m.Q(1, 1) = -m.Q(0, 0);
    m.lambda = 0.5 * std::abs(c1) / m.rho;
    if (!(std::abs(c1) > 1e-14 * std::max(m.rho, 1e-300)))
        throw degenerate_moment_error(
            "moments: Q vanishes, the normalized tensor is undefined");
    double theta = -0.5 * std::arg(c1);
    Vec Omega = canonical_director({std::cos(theta), std::sin(theta)});
    m.Omega = Omega;
    m.theta = std::atan2(Omega[1], Omega[0]);
    m.Sigma = (0.5 / m.lambda) * m.Q;
    m.eta_f = alpha * std::abs(c1);
    m.chi = 2.0 * m.lambda;
    return m;
}

std::vector<cplx> collision(const OrientationState& state, double alpha, int extend) {
    const int K = state.K;
    const int Kout = K + std::max(0, extend);
    std::vector<cplx> rate(Kout + 1, cplx(0.0, 0.0));
    const cplx c1 = mode(state, 1);
    for (int k = 1; k <= Kout; ++k) {
        const cplx conv = c1 * mode(state, k - 1) - std::conj(c1) * mode(state, k + 1);
        rate[k] = -4.0 * static_cast<double>(k) * k * mode(state, k) +
                  alpha * static_cast<double>(k) * conv;
    }
    return rate;
}

std::vector<cplx> transport(const OrientationState& state, const Mat& gradu,
                            double Lambda) {
    check_tracefree(gradu);
    const Mat E = sym_part(gradu);
    const Mat W = antisym_part(gradu);
    const double e1 = E(0, 0), e2 = E(0, 1);
    const double w = W(1, 0); // W = [[0, -w], [w, 0]]
    const cplx chat(e2, e1);
    const int K = state.K;
    std::vector<cplx> rate(K + 1, cplx(0.0, 0.0));
    for (int k = 1; k <= K; ++k) {
        const cplx fv = -w * mode(state, k) + 0.5 * Lambda * chat * mode(state, k - 1) +
                        0.5 * Lambda * std::conj(chat) * mode(state, k + 1);
        rate[k] = cplx(0.0, -2.0 * k) * fv;
    }
    return rate;
}

FreeEnergy free_energy(const OrientationState& state, double alpha) {
    const int M = std::max(256, 8 * (state.K + 1));
    std::vector<double> f, df;
    grid_values(state, M, &f, &df);
    const double rho = state.rho();
    const cplx c1 = mode(state, 1);

    double entropy = 0.0, dissip = 0.0;
    for (int q = 0; q < M; ++q) {
        if (!(f[q] > 0.0))
            throw positivity_error("free_energy: reconstructed distribution is not positive");
        entropy += f[q] * std::log(f[q]) - f[q];
        const double phi = 2.0 * pi * q / M;
        const cplx e(std::cos(2.0 * phi), std::sin(2.0 * phi));
        const double dU = alpha * (c1 * e).imag();
        const double dmu = df[q] / f[q] + dU;
        dissip += f[q] * dmu * dmu;
    }
    entropy /= M; // normalized measure
    dissip /= M;

    FreeEnergy out;
    out.A0 = entropy + 0.25 * alpha * rho * rho - 0.25 * alpha * std::norm(c1);
    out.dissipation = dissip;
    return out;
}

double gci_residual(const OrientationState& state, double alpha, int gci_basis,
                    double eta_override) {
    const Moments m = moments(state, alpha); // throws when degenerate
    const double eta = eta_override > 0.0 ? eta_override : m.eta_f;
    const GciSolution h = solve_h(eta, 2, gci_basis);

    const std::vector<cplx> rate = collision(state, alpha, /*extend=*/1);
    const double theta0 = m.theta;
    const int M = std::max(256, 8 * (state.K + 3));
    double acc = 0.0, nC = 0.0, nP = 0.0;
    for (int q = 0; q < M; ++q) {
        const double phi = 2.0 * pi * q / M;
        double Cf = rate[0].real();
        for (size_t k = 1; k < rate.size(); ++k) {
            const cplx e(std::cos(2.0 * k * phi), std::sin(2.0 * k * phi));
            Cf += 2.0 * (rate[k] * e).real();
        }
        const double psi = h(std::cos(phi - theta0)) * std::sin(phi - theta0);
        acc += Cf * psi;
        nC += Cf * Cf;
        nP += psi * psi;
    }
    acc /= M;
    nC = std::sqrt(nC / M);
    nP = std::sqrt(nP / M);
    // At a numerical equilibrium the rate is pure rounding noise and the ratio
    // |acc|/(|C||psi|) degenerates; fall back to the collision scale of the
    // state (the magnitude of the terms summed when forming the rate).
    const cplx c1 = mode(state, 1);
    double scale2 = 0.0;
    for (int k = 1; k <= state.K; ++k) {
        const double term = 4.0 * k * k * std::abs(mode(state, k)) +
                            alpha * k * std::abs(c1) *
                                (std::abs(mode(state, k - 1)) + std::abs(mode(state, k + 1)));
        scale2 += 2.0 * term * term;
    }
    const double scale = std::sqrt(scale2);
    if (nC < 1e-13 * scale) return std::abs(acc) / (scale * nP);
    return std::abs(acc) / (nC * nP);
}

void SimConfig::validate() const {
    if (params.n != 2)
        throw invalid_parameter("simulate: the spectral simulator is two-dimensional");
    params.validate();
    if (!(eps > 0.0)) throw invalid_parameter("simulate: eps must be positive");
    check_tracefree(gradu);
    if (!(tmax > 0.0)) throw invalid_parameter("simulate: tmax must be positive");
}

Trajectory simulate(const OrientationState& initial, const SimConfig& config) {
    config.validate();
    const int K = initial.K;
    const double eps = config.eps;
    const double dt = config.dt > 0.0 ? config.dt : std::min(eps / 4.0, 1e-3);
    const long steps = static_cast<long>(std::ceil(config.tmax / dt - 1e-12));
    const int stride = config.output_every > 0
                           ? config.output_every
                           : std::max(1L, steps / 400);

    // Exact exponentials of the (1/eps) Laplacian and the phi_1 weights of the
    // exponential integrator. phi_1(z) = (e^z - 1)/z keeps equilibria of the
    // full right-hand side exact fixed points of the scheme.
    auto phi1 = [](double z) {
        if (std::abs(z) < 1e-5) return 1.0 + 0.5 * z + z * z / 6.0;
        return std::expm1(z) / z;
    };
    std::vector<double> Ehalf(K + 1), Efull(K + 1), P1half(K + 1), P1full(K + 1);
    for (int k = 0; k <= K; ++k) {
        const double z = -4.0 * k * k * dt / eps;
        Ehalf[k] = std::exp(0.5 * z);
        Efull[k] = std::exp(z);
        P1half[k] = phi1(0.5 * z);
        P1full[k] = phi1(z);
    }

    const double alpha = config.params.alpha;
    const double Lambda = config.params.Lambda;
    auto nonstiff = [&](const OrientationState& s) {
        std::vector<cplx> r = transport(s, config.gradu, Lambda);
        const cplx c1 = mode(s, 1);
        for (int k = 1; k <= K; ++k) {
            const cplx conv = c1 * mode(s, k - 1) - std::conj(c1) * mode(s, k + 1);
            r[k] += (alpha / eps) * static_cast<double>(k) * conv;
        }
        return r;
    };

    Trajectory traj;
    OrientationState s = initial;
    const double rho0 = s.rho();

    auto record = [&](const OrientationState& st) {
        TrajectoryPoint p;
        p.t = st.time;
        p.state = st;
        p.mom = moments(st, alpha);
        p.min_f = st.min_value();
        if (p.min_f < -1e-8 * rho0) traj.positivity_ok = false;
        if (config.with_free_energy) {
            try {
                const FreeEnergy fe = free_energy(st, alpha);
                p.A0 = fe.A0;
                p.dissipation = fe.dissipation;
            } catch (const positivity_error&) {
                p.A0 = std::nan("");
                p.dissipation = std::nan("");
                traj.positivity_ok = false;
            }
        } else {
            p.A0 = std::nan("");
            p.dissipation = std::nan("");
        }
        traj.points.push_back(std::move(p));
    };

    record(s);
    for (long step = 0; step < steps; ++step) {
        const std::vector<cplx> k1 = nonstiff(s);
        if (config.integrator == Integrator::etd_midpoint) {
            OrientationState mid = s;
            for (int k = 0; k <= K; ++k)
                mid.c[k] = Ehalf[k] * s.c[k] + 0.5 * dt * P1half[k] * k1[k];
            const std::vector<cplx> k2 = nonstiff(mid);
            for (int k = 0; k <= K; ++k)
                s.c[k] = Efull[k] * s.c[k] + dt * P1full[k] * k2[k];
        } else {
            for (int k = 0; k <= K; ++k)
                s.c[k] = Efull[k] * s.c[k] + dt * P1full[k] * k1[k];
        }
        s.time = initial.time + (step + 1) * dt;

        double nrm = 0.0;
        for (int k = 0; k <= K; ++k) nrm = std::max(nrm, std::abs(s.c[k]));
        if (!std::isfinite(nrm) || nrm > 1e12 * std::max(rho0, 1e-300))
            throw integrator_error(
                "simulate: mode blow-up detected, retry with a smaller dt (last good t = " +
                    std::to_string(s.time - dt) + ")",
                s.time - dt);

        if ((step + 1) % stride == 0 || step + 1 == steps) record(s);
    }
    return traj;
}

KineticStress kinetic_stress(const OrientationState& state, const Mat& gradu,
                             double Lambda, double alpha, double eps, const Mat& dQdt) {
    check_tracefree(gradu);
    const Mat E = sym_part(gradu);
    const Mat W = antisym_part(gradu);
    const double rho = state.rho();
    const cplx c1 = mode(state, 1);

    Mat rhoQ(2, 2);
    rhoQ(0, 0) = 0.5 * c1.real();
    rhoQ(0, 1) = rhoQ(1, 0) = -0.5 * c1.imag();
    rhoQ(1, 1) = -rhoQ(0, 0);
    const Mat Q = (1.0 / rho) * rhoQ;

    // potential moment int omega (x) grad U0 f domega and T:E on a grid
    const int M = std::max(256, 8 * (state.K + 2));
    std::vector<double> f;
    grid_values(state, M, &f, nullptr);
    Mat pot(2, 2);
    Mat TE(2, 2); // rho T : E
    for (int q = 0; q < M; ++q) {
        const double phi = 2.0 * pi * q / M;
        const double cph = std::cos(phi), sph = std::sin(phi);
        const cplx e(std::cos(2.0 * phi), std::sin(2.0 * phi));
        const double dU = alpha * (c1 * e).imag();
        // grad U0 = dU * e_phi, e_phi = (-sin, cos)
        pot(0, 0) += f[q] * cph * (-sph) * dU;
        pot(0, 1) += f[q] * cph * cph * dU;
        pot(1, 0) += f[q] * sph * (-sph) * dU;
        pot(1, 1) += f[q] * sph * cph * dU;
        const double omEom = E(0, 0) * (cph * cph - sph * sph) + 2.0 * E(0, 1) * cph * sph;
        TE(0, 0) += f[q] * cph * cph * omEom;
        TE(0, 1) += f[q] * cph * sph * omEom;
        TE(1, 1) += f[q] * sph * sph * omEom;
    }
    for (double* v : {&pot(0, 0), &pot(0, 1), &pot(1, 0), &pot(1, 1), &TE(0, 0),
                      &TE(0, 1), &TE(1, 1)})
        *v /= M;
    TE(1, 0) = TE(0, 1);

    KineticStress out;
    out.potential_moment = pot;
    out.direct = 2.0 * Lambda * rhoQ +
                 (0.5 * (Lambda + 1.0)) * pot + (0.5 * (Lambda - 1.0)) * transpose(pot);

    Mat bracket = Lambda * (E * Q + Q * E) + (Q * W - W * Q) + Lambda * E; // (2 Lambda/n) E, n=2
    bracket = bracket - (2.0 * Lambda / rho) * TE;
    bracket = bracket - dQdt;
    out.from_moments =
        (0.5 * eps * Lambda * rho) * bracket + 0.5 * (pot - transpose(pot));
    return out;
}

Mat adjoint_linearized_matrix(double rho, double eta, double theta0, double alpha,
                              int K) {
    if (!(rho > 0.0) || !(eta >= 0.0) || K < 1)
        throw invalid_parameter("adjoint_linearized_matrix: bad arguments");
    const int dim = 2 * K + 1;
    const int M = std::max(512, 16 * (K + 1));
    const double etap = alpha * rho * s2(eta, 2); // Q-moment scale of the Gibbs state

    // Gibbs density values
    const double z = 0.5 * eta;
    const double i0 = std::cyl_bessel_i(0.0, z);
    std::vector<double> G(M), sin2t(M), cos2p(M), sin2p(M);
    for (int q = 0; q < M; ++q) {
        const double phi = 2.0 * pi * q / M;
        G[q] = std::exp(z * std::cos(2.0 * (phi - theta0))) / i0;
        sin2t[q] = std::sin(2.0 * (phi - theta0));
        cos2p[q] = std::cos(2.0 * phi);
        sin2p[q] = std::sin(2.0 * phi);
    }

    Mat A(dim, dim);
    std::vector<double> b(M), bp(M), bpp(M), Ab(M);
    for (int col = 0; col < dim; ++col) {
        const int k = (col + 1) / 2;
        const bool is_cos = (col % 2 == 1);
        for (int q = 0; q < M; ++q) {
            const double phi = 2.0 * pi * q / M;
            if (col == 0) {
                b[q] = 1.0; bp[q] = 0.0; bpp[q] = 0.0;
            } else if (is_cos) {
                b[q] = std::cos(2.0 * k * phi);
                bp[q] = -2.0 * k * std::sin(2.0 * k * phi);
                bpp[q] = -4.0 * k * k * b[q];
            } else {
                b[q] = std::sin(2.0 * k * phi);
                bp[q] = 2.0 * k * std::cos(2.0 * k * phi);
                bpp[q] = -4.0 * k * k * b[q];
            }
        }
        // inner = L*_{eta} b evaluated against the state's own exponent;
        // leading term uses the moment scale eta'
        double m11 = 0.0, m12 = 0.0;
        for (int q = 0; q < M; ++q) {
            const double inner = bpp[q] - eta * sin2t[q] * bp[q];
            const double hq = G[q] * inner;
            m11 += 0.5 * cos2p[q] * hq;
            m12 += 0.5 * sin2p[q] * hq;
        }
        m11 /= M;
        m12 /= M;
        for (int q = 0; q < M; ++q) {
            const double term1 = bpp[q] - etap * sin2t[q] * bp[q];
            const double term2 = -alpha * rho * (m11 * cos2p[q] + m12 * sin2p[q]);
            Ab[q] = term1 + term2;
        }
        // project Ab onto the basis
        for (int row = 0; row < dim; ++row) {
            const int kr = (row + 1) / 2;
            double acc = 0.0;
            if (row == 0) {
                for (int q = 0; q < M; ++q) acc += Ab[q];
                acc /= M;
            } else if (row % 2 == 1) {
                for (int q = 0; q < M; ++q)
                    acc += Ab[q] * std::cos(2.0 * kr * (2.0 * pi * q / M));
                acc = 2.0 * acc / M;
            } else {
                for (int q = 0; q < M; ++q)
                    acc += Ab[q] * std::sin(2.0 * kr * (2.0 * pi * q / M));
                acc = 2.0 * acc / M;
            }
            A(row, col) = acc;
        }
    }
    return A;
}

KernelReport adjoint_kernel_report(double rho, double eta, double theta0, double alpha,
                                   int K, int gci_basis) {
    const Mat A = adjoint_linearized_matrix(rho, eta, theta0, alpha, K);
    const SvdResult svd = jacobi_svd(A);
    const int dim = 2 * K + 1;

    KernelReport rep;
    rep.sigma = svd.sigma;
    const double smax = svd.sigma[0];
    int kd = 0;
    for (int i = dim - 1; i >= 0; --i) {
        if (svd.sigma[i] < 1e-8 * smax) ++kd;
        else break;
    }
    rep.kernel_dim = kd;
    if (kd == 0 || kd == dim)
        throw ambiguous_kernel_error("adjoint kernel: no singular values below threshold");
    const double largest_kernel = svd.sigma[dim - kd];
    const double smallest_rest = svd.sigma[dim - kd - 1];
    rep.gap_ratio = largest_kernel > 0.0 ? smallest_rest / largest_kernel
                                         : std::numeric_limits<double>::infinity();
    if (rep.gap_ratio < 1e3)
        throw ambiguous_kernel_error(
            "adjoint kernel: singular-value gap ratio " + std::to_string(rep.gap_ratio) +
            " below 1e3; kernel dimension is ambiguous");

    Mat kernel(dim, kd);
    for (int j = 0; j < kd; ++j)
        for (int i = 0; i < dim; ++i) kernel(i, j) = svd.V(i, dim - kd + j);

    // reference invariants: the constant and h(cos(phi-theta0)) sin(phi-theta0)
    const GciSolution h = solve_h(eta, 2, gci_basis);
    const int M = std::max(512, 16 * (K + 1));
    Mat ref(dim, 2);
    ref(0, 0) = 1.0;
    std::vector<double> psi(M);
    for (int q = 0; q < M; ++q) {
        const double phi = 2.0 * pi * q / M;
        psi[q] = h(std::cos(phi - theta0)) * std::sin(phi - theta0);
    }
    for (int row = 0; row < dim; ++row) {
        const int kr = (row + 1) / 2;
        double acc = 0.0;
        if (row == 0) {
            for (int q = 0; q < M; ++q) acc += psi[q];
            acc /= M;
        } else if (row % 2 == 1) {
            for (int q = 0; q < M; ++q) acc += psi[q] * std::cos(2.0 * kr * (2.0 * pi * q / M));
            acc = 2.0 * acc / M;
        } else {
            for (int q = 0; q < M; ++q) acc += psi[q] * std::sin(2.0 * kr * (2.0 * pi * q / M));
            acc = 2.0 * acc / M;
        }
        ref(row, 1) = acc;
    }
    rep.angle_pair_sin = subspace_angle_sin(kernel, ref);
    Mat gci_only(dim, 1);
    for (int i = 0; i < dim; ++i) gci_only(i, 0) = ref(i, 1);
    rep.angle_gci_sin = subspace_angle_sin(kernel, gci_only);
    return rep;
}

} // namespace doi
