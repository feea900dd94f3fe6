#include "doi/gci.hpp"
#include "doi/equilibria.hpp"
#include "doi/errors.hpp"
#include "doi/linalg.hpp"
#include "doi/quadrature.hpp"

#include <cmath>
#include <string>

namespace doi {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_args(double eta, int n) {
    if (!(eta >= 0.0)) throw invalid_parameter("gci: eta must be >= 0");
    if (n < 2) throw invalid_parameter("gci: dimension must be >= 2");
}

/// Orthonormal polynomials for a symmetric discrete measure, generated by the
/// Stieltjes recurrence  beta_{m+1} p_{m+1} = r p_m - beta_m p_{m-1}.
/// The measure is even, so the p_m have alternating parity and the odd-degree
/// ones span the odd polynomials. Raw monomial or Chebyshev bases become
/// numerically dependent once the Gibbs factor concentrates at the endpoints;
/// this basis keeps the Galerkin systems well conditioned at large eta.
struct OddBasis {
    int degree_count;          // number of p_m generated (m = 0..degree_count-1)
    std::vector<double> beta;  // beta[m], m = 1..degree_count-1 (beta[0] unused)
    double p0;                 // constant value of p_0

    /// Values (and optionally d/dr, d2/dr2) of p_0..p_{M-1} at r.
    void eval(double r, std::vector<double>& p, std::vector<double>* dp = nullptr,
              std::vector<double>* ddp = nullptr) const {
        const int M = degree_count;
        p.assign(M, 0.0);
        if (dp) dp->assign(M, 0.0);
        if (ddp) ddp->assign(M, 0.0);
        p[0] = p0;
        for (int m = 1; m < M; ++m) {
            const double prev2 = m >= 2 ? p[m - 2] : 0.0;
            p[m] = (r * p[m - 1] - (m >= 2 ? beta[m - 1] * prev2 : 0.0)) / beta[m];
            if (dp) {
                const double dprev2 = m >= 2 ? (*dp)[m - 2] : 0.0;
                (*dp)[m] = (p[m - 1] + r * (*dp)[m - 1] -
                            (m >= 2 ? beta[m - 1] * dprev2 : 0.0)) / beta[m];
            }
            if (ddp) {
                const double ddprev2 = m >= 2 ? (*ddp)[m - 2] : 0.0;
                (*ddp)[m] = (2.0 * (*dp)[m - 1] + r * (*ddp)[m - 1] -
                             (m >= 2 ? beta[m - 1] * ddprev2 : 0.0)) / beta[m];
            }
        }
    }
};

/// Build the basis for the discrete measure {nodes[q], W[q]} up to the given
/// number of degrees, together with nodal tables of values and derivatives.
OddBasis build_basis(const std::vector<double>& nodes, const std::vector<double>& W,
                     int degree_count, std::vector<std::vector<double>>& val,
                     std::vector<std::vector<double>>& d1,
                     std::vector<std::vector<double>>& d2) {
    const int m = static_cast<int>(nodes.size());
    OddBasis basis;
    basis.degree_count = degree_count;
    basis.beta.assign(degree_count, 0.0);

    double mass = 0.0;
    for (double w : W) mass += w;
    basis.p0 = 1.0 / std::sqrt(mass);

    val.assign(degree_count, std::vector<double>(m));
    d1.assign(degree_count, std::vector<double>(m));
    d2.assign(degree_count, std::vector<double>(m));
    for (int q = 0; q < m; ++q) {
        val[0][q] = basis.p0;
        d1[0][q] = 0.0;
        d2[0][q] = 0.0;
    }
    for (int k = 1; k < degree_count; ++k) {
        std::vector<double> v(m), dv(m), ddv(m);
        double nrm2 = 0.0;
        for (int q = 0; q < m; ++q) {
            const double r = nodes[q];
            const double prev2 = k >= 2 ? val[k - 2][q] : 0.0;
            const double dprev2 = k >= 2 ? d1[k - 2][q] : 0.0;
            const double ddprev2 = k >= 2 ? d2[k - 2][q] : 0.0;
            const double bk1 = k >= 2 ? basis.beta[k - 1] : 0.0;
            v[q] = r * val[k - 1][q] - bk1 * prev2;
            dv[q] = val[k - 1][q] + r * d1[k - 1][q] - bk1 * dprev2;
            ddv[q] = 2.0 * d1[k - 1][q] + r * d2[k - 1][q] - bk1 * ddprev2;
            nrm2 += W[q] * v[q] * v[q];
        }
        const double b = std::sqrt(nrm2);
        if (!(b > 0.0))
            throw numeric_domain_error("gci basis: degenerate discrete measure");
        basis.beta[k] = b;
        for (int q = 0; q < m; ++q) {
            val[k][q] = v[q] / b;
            d1[k][q] = dv[q] / b;
            d2[k][q] = ddv[q] / b;
        }
    }
    return basis;
}

} // namespace

// GciSolution holds coeff[j] against the odd-degree orthonormal polynomials
// p_{2j+1}; the recurrence normalizers are appended behind the coefficients:
// coeff layout = [c_0..c_{K-1}, p0, beta_1..beta_{2K-1}].

namespace {

void gci_eval(const GciSolution& sol, double r, double* h, double* hp) {
    const int K = sol.basis_size;
    OddBasis basis;
    basis.degree_count = 2 * K;
    basis.p0 = sol.coeff[K];
    basis.beta.assign(2 * K, 0.0);
    for (int m = 1; m < 2 * K; ++m) basis.beta[m] = sol.coeff[K + 1 + (m - 1)];
    std::vector<double> p, dp;
    basis.eval(r, p, hp ? &dp : nullptr);
    double s = 0.0, spr = 0.0;
    for (int j = 0; j < K; ++j) {
        s += sol.coeff[j] * p[2 * j + 1];
        if (hp) spr += sol.coeff[j] * dp[2 * j + 1];
    }
    if (h) *h = s;
    if (hp) *hp = spr;
}

} // namespace

double GciSolution::operator()(double r) const {
    double h = 0.0;
    gci_eval(*this, r, &h, nullptr);
    return h;
}

double GciSolution::deriv(double r) const {
    double hp = 0.0;
    gci_eval(*this, r, nullptr, &hp);
    return hp;
}

GciSolution solve_h(double eta, int n, int basis_size) {
    check_args(eta, n);
    const int K = basis_size > 0 ? basis_size : default_gci_basis;
    const int m = nodes_for(eta, 4 * K);
    auto rule = cached_rule(n, m);

    // Mass weight of the weak form: w (1-r^2) (2 eta r^2 + n - 1) e^{eta(r^2-1)};
    // the basis is orthonormal against it, so the mass block is the identity.
    std::vector<double> Wmass(m), Wstiff(m);
    for (int q = 0; q < m; ++q) {
        const double r = rule->nodes[q];
        const double u = 1.0 - r * r;
        const double g = rule->weights[q] * std::exp(eta * (r * r - 1.0)) * u;
        Wmass[q] = g * (2.0 * eta * r * r + n - 1.0);
        Wstiff[q] = g * u;
    }

    std::vector<std::vector<double>> val, d1, d2;
    OddBasis basis = build_basis(rule->nodes, Wmass, 2 * K, val, d1, d2);

    Mat B(K, K);
    Vec L(K, 0.0);
    for (int j = 0; j < K; ++j) B(j, j) = 1.0;
    for (int q = 0; q < m; ++q) {
        const double r = rule->nodes[q];
        const double u = 1.0 - r * r;
        const double src = rule->weights[q] * std::exp(eta * (r * r - 1.0)) * u * r;
        for (int j = 0; j < K; ++j) {
            L[j] -= src * val[2 * j + 1][q];
            for (int k = j; k < K; ++k)
                B(j, k) += Wstiff[q] * d1[2 * j + 1][q] * d1[2 * k + 1][q];
        }
    }
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < j; ++k) B(j, k) = B(k, j);

    const Vec c = spd_solve(B, L);

    GciSolution sol;
    sol.eta = eta;
    sol.n = n;
    sol.basis_size = K;
    sol.coeff = c;
    sol.coeff.push_back(basis.p0);
    for (int i = 1; i < 2 * K; ++i) sol.coeff.push_back(basis.beta[i]);

    // Strong-form residual of
    //   (1-r^2) h'' + (2 eta (1-r^2) - (n+1)) r h' - (2 eta r^2 + n - 1) h = r
    // against the weight (1-r^2)^((n-1)/2) e^{eta r^2}, relative to the source.
    double res2 = 0.0, src2 = 0.0, hn = 0.0, hpn = 0.0;
    for (int q = 0; q < m; ++q) {
        const double r = rule->nodes[q];
        const double u = 1.0 - r * r;
        double h = 0.0, hp = 0.0, hpp = 0.0;
        for (int j = 0; j < K; ++j) {
            h += c[j] * val[2 * j + 1][q];
            hp += c[j] * d1[2 * j + 1][q];
            hpp += c[j] * d2[2 * j + 1][q];
        }
        const double R = u * hpp + (2.0 * eta * u - (n + 1.0)) * r * hp -
                         (2.0 * eta * r * r + n - 1.0) * h - r;
        const double wq = rule->weights[q] * std::exp(eta * (r * r - 1.0)) * u;
        res2 += wq * R * R;
        src2 += wq * r * r;
        hn += wq * h * h;
        hpn += wq * u * hp * hp;
    }
    sol.residual = std::sqrt(res2 / src2);
    sol.h_norm2_w = hn;
    sol.hp_norm2_w = hpn;
    if (!(sol.residual < 1e-8))
        throw resolution_error("solve_h: residual " + std::to_string(sol.residual) +
                                   " above 1e-8 at basis size " + std::to_string(K) +
                                   " (eta = " + std::to_string(eta) + ", n = " +
                                   std::to_string(n) + ")",
                               sol.residual);
    return sol;
}

// GFunction stores g(theta) = sin(theta) * sum_j c_j p_{2j+1}(cos theta) with
// the same coefficient layout as GciSolution.

namespace {

void g_eval(const GFunction& g, double theta, double* gval, double* gder) {
    const int K = g.basis_size;
    OddBasis basis;
    basis.degree_count = 2 * K;
    basis.p0 = g.coeff[K];
    basis.beta.assign(2 * K, 0.0);
    for (int m = 1; m < 2 * K; ++m) basis.beta[m] = g.coeff[K + 1 + (m - 1)];
    const double r = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<double> p, dp;
    basis.eval(r, p, gder ? &dp : nullptr);
    double pv = 0.0, pd = 0.0;
    for (int j = 0; j < K; ++j) {
        pv += g.coeff[j] * p[2 * j + 1];
        if (gder) pd += g.coeff[j] * dp[2 * j + 1];
    }
    if (gval) *gval = s * pv;
    if (gder) *gder = r * pv - s * s * pd;
}

} // namespace

double GFunction::operator()(double theta) const {
    double v = 0.0;
    g_eval(*this, theta, &v, nullptr);
    return v;
}

double GFunction::deriv(double theta) const {
    double d = 0.0;
    g_eval(*this, theta, nullptr, &d);
    return d;
}

GFunction solve_g(double eta, int n, int basis_size) {
    check_args(eta, n);
    const int K = basis_size > 0 ? basis_size : default_gci_basis;
    const int m = nodes_for(eta, 4 * K);
    auto rule = cached_rule(n, m);

    // g = sin(theta) p(cos theta), p odd polynomial. In r = cos theta:
    //   dg/dtheta  = r p - (1-r^2) p'
    //   B(g,v) = int w E [ (dg/dtheta)(dv/dtheta) + (n-2) p q ] dr
    //   L(v)   = int w E 2 eta r (1-r^2) q dr
    std::vector<double> Wgibbs(m);
    for (int q = 0; q < m; ++q) {
        const double r = rule->nodes[q];
        Wgibbs[q] = rule->weights[q] * std::exp(eta * (r * r - 1.0));
    }
    std::vector<std::vector<double>> val, d1, d2;
    OddBasis basis = build_basis(rule->nodes, Wgibbs, 2 * K, val, d1, d2);

    Mat B(K, K);
    Vec L(K, 0.0);
    for (int q = 0; q < m; ++q) {
        const double r = rule->nodes[q];
        const double u = 1.0 - r * r;
        for (int j = 0; j < K; ++j) {
            const double dgj = r * val[2 * j + 1][q] - u * d1[2 * j + 1][q];
            L[j] += Wgibbs[q] * 2.0 * eta * r * u * val[2 * j + 1][q];
            for (int k = j; k < K; ++k) {
                const double dgk = r * val[2 * k + 1][q] - u * d1[2 * k + 1][q];
                B(j, k) += Wgibbs[q] * (dgj * dgk + (n - 2.0) * val[2 * j + 1][q] *
                                                        val[2 * k + 1][q]);
            }
        }
    }
    for (int j = 0; j < K; ++j)
        for (int k = 0; k < j; ++k) B(j, k) = B(k, j);

    const Vec c = spd_solve(B, L);

    GFunction g;
    g.eta = eta;
    g.n = n;
    g.basis_size = K;
    g.coeff = c;
    g.coeff.push_back(basis.p0);
    for (int i = 1; i < 2 * K; ++i) g.coeff.push_back(basis.beta[i]);

    // Residual of the angular equation, weight e^{eta cos^2 th} sin^{n-2} th.
    // With g = s p:  g'' = -s [ (3 - (n+... )) ] -- assembled from p directly:
    //   g'  = r p - (1-r^2) p'
    //   g'' = -s [ 3 r p' + p - (1-r^2) p'' ]         (d/dtheta = -s d/dr)
    //   g / s^2 = p / s
    // R = g'' + ((n-2) r / s - 2 eta r s) g' - (n-2) g / s^2 + 2 eta r s
    double res2 = 0.0, src2 = 0.0;
    for (int q = 0; q < m; ++q) {
        const double r = rule->nodes[q];
        const double u = 1.0 - r * r;
        const double s = std::sqrt(u);
        double p = 0.0, p1 = 0.0, p2 = 0.0;
        for (int j = 0; j < K; ++j) {
            p += c[j] * val[2 * j + 1][q];
            p1 += c[j] * d1[2 * j + 1][q];
            p2 += c[j] * d2[2 * j + 1][q];
        }
        const double gp = r * p - u * p1;
        const double gpp = -s * (3.0 * r * p1 + p - u * p2);
        // the two 1/s pieces combine to (n-2)(r gp - p)/s, finite at r -> +-1
        const double R = gpp + (n - 2.0) * (r * gp - p) / s - 2.0 * eta * r * s * gp +
                         2.0 * eta * r * s;
        res2 += Wgibbs[q] * R * R;
        src2 += Wgibbs[q] * 4.0 * eta * eta * r * r * u;
    }
    g.residual = eta > 0.0 ? std::sqrt(res2 / src2)
                           : std::sqrt(res2 / rule->weight_mass());
    if (!(g.residual < 1e-8))
        throw resolution_error("solve_g: residual " + std::to_string(g.residual) +
                                   " above 1e-8 at basis size " + std::to_string(K),
                               g.residual);
    return g;
}

double ClosedFormN2::g(double theta) const {
    if (eta == 0.0) return 0.0;
    const double A = adaptive_simpson(
        [this](double phi) { return std::exp(-0.5 * eta * std::cos(2.0 * phi)); }, 0.0,
        theta, 1e-13);
    return theta + C * A;
}

double ClosedFormN2::h(double r) const {
    if (eta == 0.0) return -0.25 * r; // the n = 2 value -r/(2n)
    const double s2 = 1.0 - r * r;
    if (s2 < 1e-12) {
        // endpoint limit h(+-1) = -+ g'(0) / (2 eta)
        const double gp0 = 1.0 + C * std::exp(-0.5 * eta);
        return (r > 0.0 ? -1.0 : 1.0) * gp0 / (2.0 * eta);
    }
    const double theta = std::acos(r);
    return -g(theta) / (2.0 * eta * std::sqrt(s2));
}

ClosedFormN2 h_closed_form_n2(double eta) {
    if (!(eta >= 0.0)) throw invalid_parameter("h_closed_form_n2: eta must be >= 0");
    ClosedFormN2 cf{eta, 0.0};
    if (eta > 0.0) {
        const double Api = adaptive_simpson(
            [eta](double phi) { return std::exp(-0.5 * eta * std::cos(2.0 * phi)); }, 0.0,
            pi, 1e-13);
        cf.C = -pi / Api;
    }
    return cf;
}

GammaTildes gamma_tildes(double eta, int n, double rho, const GciSolution& h) {
    if (h.eta != eta || h.n != n)
        throw invalid_parameter("gamma_tildes: (eta, n) inconsistent with the GCI solve");
    if (!(eta > 0.0)) throw invalid_parameter("gamma_tildes: eta must be positive");
    auto rule = cached_rule(n, nodes_for(eta));
    const double i1 = axisymmetric_average(
        [&h](double r) { return h(r) * r * (1.0 - r * r); }, eta, *rule);
    const double i2 = axisymmetric_average(
        [&h](double r) { return h(r) * r * r * r * (1.0 - r * r); }, eta, *rule);
    GammaTildes g;
    g.rho = rho;
    g.eta = eta;
    g.g1 = 2.0 * eta * rho / (n - 1.0) * i1;
    g.g2 = 2.0 * eta * rho / (n - 1.0) * i2;
    g.g3 = (1.0 - n / eta) * g.g1 - 2.0 * g.g2;
    return g;
}

double constant_c_lambda0(double eta, int n, const GciSolution& h) {
    if (!(eta > 0.0)) throw invalid_parameter("constant_c: eta must be positive");
    if (h.eta != eta || h.n != n)
        throw invalid_parameter("constant_c: (eta, n) inconsistent with the GCI solve");
    auto rule = cached_rule(n, nodes_for(eta));
    const double i1 = axisymmetric_average(
        [&h](double r) { return h(r) * r * (1.0 - r * r); }, eta, *rule);
    // <<g dU0/dtheta>> with g = -2 eta h sin(theta) equals -4 eta^2 i1
    const double denom = -4.0 * eta * eta * i1;
    return (n - 1.0) * s2(eta, n) / denom;
}

double constant_c(double eta, int n, double Lambda, const GciSolution& h) {
    if (Lambda == 0.0)
        throw lambda_zero_error(
            "constant_c: Lambda = 0 has no mobility of this form; use constant_c_lambda0");
    return Lambda * constant_c_lambda0(eta, n, h);
}

} // namespace doi
