#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doi/errors.hpp"
#include "doi/leslie.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace doi;

namespace {

constexpr double pi = 3.14159265358979323846;

FlowPoint random_flow_point(oracle::Rng& rng, int n) {
    FlowPoint fp;
    fp.E = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) fp.E(i, j) = fp.E(j, i) = rng.uniform();
    const double t = trace(fp.E) / n;
    for (int i = 0; i < n; ++i) fp.E(i, i) -= t;
    fp.W = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            fp.W(i, j) = rng.uniform();
            fp.W(j, i) = -fp.W(i, j);
        }
    fp.Omega = rng.unit_vector(n);
    fp.H = Vec(n);
    for (double& x : fp.H) x = rng.uniform();
    return fp;
}

} // namespace

TEST_CASE("coefficient identities over a parameter grid") {
    for (int n : {2, 3, 4}) {
        for (double Lambda : {-0.9, 0.5, 1.0}) {
            for (double zeta : {0.0, 0.5}) {
                ModelParams P{n, 7.0, Lambda, zeta, 0.5};
                for (double eta : {0.5, 3.0, 17.0}) {
                    const LeslieCoefficients k = leslie_coefficients_at_eta(P, eta);
                    CHECK(std::abs((k.a6 - k.a5) - (k.a2 + k.a3)) <= 1e-12);
                    CHECK(std::abs(k.gamma1 - (k.a3 - k.a2)) <= 1e-12);
                    CHECK(std::abs(k.gamma2 - (k.a2 + k.a3)) <= 1e-12);
                    CHECK(std::abs(k.gamma1 - Lambda * k.S2 / k.c) <= 1e-12);
                    CHECK(std::abs(k.gamma2 + Lambda * k.S2) <= 1e-12);
                    CHECK(k.gamma1 > 0.0); // c/Lambda > 0 and S2 > 0
                }
            }
        }
    }
}

TEST_CASE("isotropic coefficients collapse to a4") {
    ModelParams P{4, 7.0, 0.8, 0.5, 0.5};
    const LeslieCoefficients k = assemble_leslie(P, 1.0, 1.0, 0.0, 0.0, 1.3);
    CHECK(k.a1 == 0.0);
    CHECK(k.a2 == 0.0);
    CHECK(k.a3 == 0.0);
    CHECK(k.a5 == 0.0);
    CHECK(k.a6 == 0.0);
    const double expect =
        (1.0 / P.n) * (P.Lambda * P.Lambda +
                       2.0 * (P.zeta - P.Lambda * P.Lambda) / (P.n + 2.0));
    CHECK(k.a4 == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("coefficients require the branch and a shape anisotropy") {
    ModelParams P{3, 8.0, 1.0, 0.5, 0.5};
    CHECK_THROWS_AS(leslie_coefficients(P, 1e-3), no_branch_error);
    ModelParams P0 = P;
    P0.Lambda = 0.0;
    CHECK_THROWS_AS(leslie_coefficients(P0, 2.0), lambda_zero_error);
}

TEST_CASE("viscous director stress") {
    ModelParams P{3, 10.0, 0.8, 0.5, 0.4};
    const LeslieCoefficients k = leslie_coefficients(P, 1.3);
    oracle::Rng rng(3);

    // zero input, zero stress
    FlowPoint rest;
    rest.E = Mat(3, 3);
    rest.W = Mat(3, 3);
    rest.Omega = {0.0, 0.0, 1.0};
    rest.H = {0.0, 0.0, 0.0};
    rest.N = Vec{0.0, 0.0, 0.0};
    CHECK(frobenius_norm(leslie_stress(k, k.rho, rest)) == 0.0);

    // degree-1 homogeneity in (E, N)
    FlowPoint fp = random_flow_point(rng, 3);
    fp.N = derive_corotational_rate(k, fp);
    const Mat s1 = leslie_stress(k, k.rho, fp);
    FlowPoint fp2 = fp;
    fp2.E = 2.0 * fp.E;
    fp2.N = 2.0 * (*fp.N);
    const Mat s2m = leslie_stress(k, k.rho, fp2);
    CHECK(frobenius_norm(s2m - 2.0 * s1) <= 1e-12 * frobenius_norm(s1));

    // pointwise dissipation identity on random draws
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        FlowPoint q = random_flow_point(rng, 3);
        q.N = derive_corotational_rate(k, q);
        const Mat sig = leslie_stress(k, k.rho, q);
        const double lhs = frobenius_inner(sig, q.E + q.W);
        const DissipationResult dd = dissipation_density(k, k.rho, q, 1);
        const Vec NmW = *q.N - q.W * q.Omega;
        const double rhs = dd.value - k.rho * dot(q.H, NmW);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK(worst <= 1e-10);

    // invariant violation is rejected
    FlowPoint bad = fp;
    bad.Omega = {2.0, 0.0, 0.0};
    CHECK_THROWS_AS(leslie_stress(k, k.rho, bad), invalid_parameter);
}

TEST_CASE("elastic stress forms") {
    ModelParams P{3, 10.0, 0.8, 0.5, 0.4};
    const double rho = 1.3;
    const double eta = eta_of_rho(rho, P);
    oracle::Rng rng(5);

    FieldJet J;
    J.rho = rho;
    J.eta = eta;
    J.on_branch = true;
    J.Omega = rng.unit_vector(3);
    J.grad_eta = {rng.uniform(), rng.uniform(), rng.uniform()};
    J.grad_rho = drho_deta(eta, P) * J.grad_eta;
    J.grad_Omega = Mat(3, 3);
    for (int i = 0; i < 3; ++i) {
        Vec row{rng.uniform(), rng.uniform(), rng.uniform()};
        row = project_perp(J.Omega, row);
        for (int j = 0; j < 3; ++j) J.grad_Omega(i, j) = row[j];
    }
    J.lap_eta_Omega = {rng.uniform(), rng.uniform(), rng.uniform()};

    // constant fields carry no elastic stress
    FieldJet flat = J;
    flat.grad_eta = flat.grad_rho = {0.0, 0.0, 0.0};
    flat.grad_Omega = Mat(3, 3);
    CHECK(frobenius_norm(ericksen_stress(P, flat)) == 0.0);

    // uniform density: sigma = -(2 beta eta^2 / alpha) gradOmega gradOmega^T
    FieldJet unif = J;
    unif.grad_eta = unif.grad_rho = {0.0, 0.0, 0.0};
    const Mat su = ericksen_stress(P, unif);
    const Mat expect = (-2.0 * P.beta * eta * eta / P.alpha) *
                       (unif.grad_Omega * transpose(unif.grad_Omega));
    CHECK(frobenius_norm(su - expect) <= 1e-12 * std::max(1.0, frobenius_norm(expect)));

    // single-gradient on-branch form
    const Mat a = ericksen_stress(P, J);
    const Mat b = ericksen_stress_alternate(P, J);
    CHECK(frobenius_norm(a - b) <= 1e-10 * std::max(1.0, frobenius_norm(a)));

    // degree-2 homogeneity in the gradient data
    FieldJet Jd = J;
    Jd.grad_eta = 2.0 * J.grad_eta;
    Jd.grad_rho = 2.0 * J.grad_rho;
    Jd.grad_Omega = 2.0 * J.grad_Omega;
    CHECK(frobenius_norm(ericksen_stress(P, Jd) - 4.0 * a) <=
          1e-12 * frobenius_norm(a));
}

TEST_CASE("pointwise energy-density identity of the single-gradient form") {
    // (2b/a)|d(eta Om)|^2 - ab(n-1)/n |drho|^2 - b(n+1)/(na)|deta|^2
    //   = (2b/a) eta^2 |dOm|^2 + b(n-1)/(na) [1 - (1 - eta S2'/S2)^2/S2^2] |deta|^2
    oracle::Rng rng(17);
    for (int n : {2, 3, 4}) {
        ModelParams P{n, 9.0, 0.7, 0.5, 0.35};
        for (double eta : {1.0, 4.0, 15.0}) {
            const double S2 = s2(eta, n);
            const double S2p = s2_prime(eta, n);
            const Vec Om = rng.unit_vector(n);
            Vec dOm{};
            dOm.assign(n, 0.0);
            for (double& x : dOm) x = rng.uniform();
            dOm = project_perp(Om, dOm);
            const double deta = rng.uniform();
            const double drho = deta * (S2 - eta * S2p) / (P.alpha * S2 * S2);
            double dEO2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double d = deta * Om[j] + eta * dOm[j];
                dEO2 += d * d;
            }
            const double lhs = 2.0 * P.beta / P.alpha * 0.5 * dEO2 -
                               P.alpha * P.beta * (n - 1.0) / n * 0.5 * drho * drho -
                               P.beta * (n + 1.0) / (n * P.alpha) * 0.5 * deta * deta;
            const double q = 1.0 - eta * S2p / S2;
            const double rhs =
                2.0 * P.beta / P.alpha * eta * eta * 0.5 * dot(dOm, dOm) +
                P.beta * (n - 1.0) / (n * P.alpha) * (1.0 - q * q / (S2 * S2)) * 0.5 *
                    deta * deta;
            CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("molecular field") {
    ModelParams P{3, 10.0, 0.8, 0.5, 0.4};
    const double rho = 1.3;
    const double eta = eta_of_rho(rho, P);
    FieldJet J;
    J.rho = rho;
    J.eta = eta;
    J.on_branch = true;
    J.Omega = {0.0, 0.0, 1.0};
    J.grad_eta = J.grad_rho = {0.0, 0.0, 0.0};
    J.grad_Omega = Mat(3, 3);
    J.lap_eta_Omega = {0.3, -0.7, 0.2};

    // rho H = (2 beta / alpha) eta Lap(eta Omega) on the branch
    const Vec H = molecular_field(P, J);
    for (int j = 0; j < 3; ++j)
        CHECK(rho * H[j] == doctest::Approx(2.0 * P.beta / P.alpha * eta *
                                            J.lap_eta_Omega[j])
                                .epsilon(1e-10));

    // constant director and density: no field
    J.lap_eta_Omega = {0.0, 0.0, 0.0};
    CHECK(norm(molecular_field(P, J)) == 0.0);
}

TEST_CASE("distortion energy on a periodic field") {
    ModelParams P{3, 10.0, 0.8, 0.5, 0.4};
    const int M = 48;
    PeriodicField F;
    F.length = 2.0;
    F.rho.assign(M, 1.3);
    F.Omega.resize(M);
    for (int m = 0; m < M; ++m) {
        const double x = 2.0 * pi * m / M;
        F.Omega[m] = {std::cos(0.4 * std::sin(x)), std::sin(0.4 * std::sin(x)), 0.0};
    }
    const FranckEnergy e = franck_energy(P, F);
    // uniform density: only the director part, with stiffness 2 beta eta^2/alpha
    const double eta = eta_of_rho(1.3, P);
    double grad2 = 0.0;
    const double dx = F.length / M;
    for (int m = 0; m < M; ++m) {
        const int mp = (m + 1) % M;
        for (int j = 0; j < 3; ++j) {
            const double d = (F.Omega[mp][j] - F.Omega[m][j]) / dx;
            grad2 += 0.5 * d * d * dx;
        }
    }
    CHECK(e.part_rho == 0.0);
    CHECK(e.part_eta == 0.0);
    CHECK(e.total ==
          doctest::Approx(2.0 * P.beta * eta * eta / P.alpha * grad2).epsilon(1e-10));

    // functional derivative against the molecular field
    PeriodicField G = F;
    for (int m = 0; m < M; ++m) {
        const double x = 2.0 * pi * m / M;
        G.rho[m] = 1.3 + 0.08 * std::cos(x);
    }
    const std::vector<FieldJet> jets = field_jets(P, G);
    double worst = 0.0;
    for (int m : {2, 19, 33}) {
        for (int j = 0; j < 3; ++j) {
            const double h = 1e-6;
            PeriodicField Gp = G, Gm = G;
            Gp.Omega[m][j] += h;
            Gm.Omega[m][j] -= h;
            const double dE =
                (franck_energy(P, Gp).total - franck_energy(P, Gm).total) / (2.0 * h);
            const Vec H = molecular_field(P, jets[m]);
            worst = std::max(worst, std::abs(dE / dx + jets[m].rho * H[j]));
        }
    }
    CHECK(worst <= 1e-5);

    // off-branch density is rejected
    PeriodicField bad = F;
    bad.rho.assign(M, 1e-3);
    CHECK_THROWS_AS(franck_energy(P, bad), no_branch_error);
}

TEST_CASE("dissipation density") {
    ModelParams P{3, 10.0, 1.0, 0.5, 0.4};
    const LeslieCoefficients k = leslie_coefficients(P, 1.3);
    oracle::Rng rng(23);
    FlowPoint fp = random_flow_point(rng, 3);
    fp.N = derive_corotational_rate(k, fp);

    FlowPoint rest = fp;
    rest.E = Mat(3, 3);
    rest.H = {0.0, 0.0, 0.0};
    rest.N = derive_corotational_rate(k, rest);
    CHECK(dissipation_density(k, k.rho, rest, 1).value == 0.0);

    // (E, H) -> (-E, -H) leaves the quadratic form unchanged
    FlowPoint neg = fp;
    neg.E = -1.0 * fp.E;
    for (double& x : neg.H) x = -x;
    neg.N = derive_corotational_rate(k, neg);
    CHECK(dissipation_density(k, k.rho, fp, 1).value ==
          doctest::Approx(dissipation_density(k, k.rho, neg, 1).value).epsilon(1e-14));

    // n = 3, zeta = 1/2, Lambda = 1: the form is positive; scan 1e4 samples
    ModelParams Ppos{3, 10.0, 1.0, 0.5, 0.4};
    const LeslieCoefficients kpos = leslie_coefficients(Ppos, 1.3);
    const DissipationResult dd = dissipation_density(kpos, kpos.rho, fp, 10000);
    CHECK(dd.scan_positive);
    CHECK(dd.scan_min >= -1e-12);
}

TEST_CASE("director rate") {
    ModelParams P{2, 5.0, 1.0, 0.5, 0.4};
    const LeslieCoefficients k = leslie_coefficients_at_eta(P, 1.5);
    const double gd = 1.0;
    Mat E(2, 2), W(2, 2);
    E(0, 1) = E(1, 0) = 0.5 * gd;
    W(0, 1) = -0.5 * gd;
    W(1, 0) = 0.5 * gd;

    // rigid co-rotation without strain
    {
        Vec Om{std::cos(0.3), std::sin(0.3)};
        const Vec d = director_rhs(k, P, Om, Mat(2, 2), W);
        const Vec expect = -1.0 * (W * Om);
        CHECK(norm(d - expect) <= 1e-14);
    }

    // orthogonality and the planar shear reduction
    oracle::Rng rng(31);
    for (int t = 0; t < 25; ++t) {
        const double th = rng.uniform(-1.5, 1.5);
        Vec Om{std::cos(th), std::sin(th)};
        const Vec d = director_rhs(k, P, Om, E, W);
        CHECK(std::abs(dot(d, Om)) <= 1e-13);
        const Vec eth{-std::sin(th), std::cos(th)};
        const double thdot = dot(d, eth);
        CHECK(thdot ==
              doctest::Approx(0.5 * gd * (k.c * std::cos(2.0 * th) - 1.0)).epsilon(1e-12));
    }

    // steady alignment angle for c > 1
    REQUIRE(k.c > 1.0);
    const double tha = 0.5 * std::acos(1.0 / k.c);
    Vec Oma{std::cos(tha), std::sin(tha)};
    const Vec da = director_rhs(k, P, Oma, E, W);
    CHECK(norm(da) <= 1e-12);

    // tumbling period of the planar reduction (c < 1), integrated in the test
    const LeslieCoefficients kt = leslie_coefficients_at_eta(P, 5.0);
    REQUIRE(kt.c < 1.0);
    const double Tpred = 2.0 * pi / (gd * std::sqrt(1.0 - kt.c * kt.c));
    // closed-form integral oracle: T = 2/gd int_0^pi dth / (1 - c cos 2 th)
    const double Tint = 2.0 / gd *
                        oracle::integrate(
                            [&](double th) {
                                return 1.0 / (1.0 - kt.c * std::cos(2.0 * th));
                            },
                            0.0, pi, 1e-13);
    CHECK(Tint == doctest::Approx(Tpred).epsilon(1e-10));
    // RK4 on the angle equation reproduces it
    double th = 0.2, t = 0.0;
    const double dt = 1e-4;
    auto f = [&](double x) { return 0.5 * gd * (kt.c * std::cos(2.0 * x) - 1.0); };
    double t_cross = -1.0;
    double prev_th = th, prev_t = 0.0;
    while (t < 2.0 * Tpred) {
        const double k1 = f(th), k2 = f(th + 0.5 * dt * k1), k3 = f(th + 0.5 * dt * k2),
                     k4 = f(th + dt * k3);
        prev_th = th;
        prev_t = t;
        th += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
        if (prev_th > 0.2 - pi && th <= 0.2 - pi) {
            t_cross = prev_t + dt * (prev_th - (0.2 - pi)) / (prev_th - th);
            break;
        }
    }
    REQUIRE(t_cross > 0.0);
    CHECK(t_cross == doctest::Approx(Tpred).epsilon(1e-6));

    // the spatial term requires a shape anisotropy
    ModelParams P0 = P;
    P0.Lambda = 0.0;
    Vec lap{0.1, -0.2};
    CHECK_THROWS_AS(
        director_rhs(k, P0, Vec{1.0, 0.0}, E, W, std::optional<Vec>(lap)),
        singular_coefficient_error);
}

TEST_CASE("canonical director representative") {
    CHECK(canonical_director({-0.6, 0.8})[0] == doctest::Approx(0.6));
    CHECK(canonical_director({0.0, -1.0})[1] == doctest::Approx(1.0));
    CHECK(canonical_director({0.6, -0.8})[1] == doctest::Approx(-0.8));
}
