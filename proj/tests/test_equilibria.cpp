#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doi/equilibria.hpp"
#include "doi/errors.hpp"
#include "doi/quadrature.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace doi;

TEST_CASE("order parameter limits and monotonicity") {
    for (int n : {2, 3, 4, 6}) {
        CHECK(s2(0.0, n) == 0.0);
        CHECK(s4(0.0, n) == 0.0);
        CHECK(s2(250.0, n) > 0.97);
        CHECK(s4(400.0, n) > 0.95);
        double prev = -1.0;
        for (double eta = 0.0; eta <= 50.0; eta += 0.5) {
            const double v = s2(eta, n);
            CHECK(v >= prev - 1e-12);
            CHECK(v < 1.0);
            prev = v;
        }
    }
    CHECK_THROWS_AS(s2(-0.5, 3), invalid_parameter);
}

TEST_CASE("n = 2 order parameter is a Bessel ratio") {
    for (double eta : {0.1, 0.8, 3.0, 12.0, 45.0}) {
        const double ratio =
            std::cyl_bessel_i(1.0, 0.5 * eta) / std::cyl_bessel_i(0.0, 0.5 * eta);
        CHECK(std::abs(s2(eta, 2) - ratio) <= 1e-10);
    }
}

TEST_CASE("fourth-order parameter against the bisection oracle") {
    const int n = 3;
    auto p4 = [n](double x) {
        const double x2 = x * x;
        return (3.0 - 6.0 * (n + 2) * x2 + (n + 2.0) * (n + 4.0) * x2 * x2) /
               ((n - 1.0) * (n + 1.0));
    };
    CHECK(std::abs(s4(10.0, 3) - oracle::gibbs_average(p4, 10.0, 3)) <= 1e-10);
}

TEST_CASE("derivative of the order parameter") {
    for (int n : {2, 3, 5}) {
        for (double eta : {0.3, 2.0, 9.0, 30.0}) {
            const double fd =
                oracle::central_diff([n](double e) { return s2(e, n); }, eta, 1e-5);
            CHECK(std::abs(s2_prime(eta, n) - fd) <= 1e-7);
        }
        for (double eta = 0.0; eta <= 50.0; eta += 2.5) CHECK(s2_prime(eta, n) >= 0.0);
    }
    CHECK(s2_prime(0.0, 2) == doctest::Approx(0.25).epsilon(1e-12));
    // uniform-state value 2/(n(n+2))
    CHECK(s2_prime(0.0, 3) == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("branch density and inversion") {
    ModelParams p3{3, 8.0, 1.0, 0.5, 0.5};
    CHECK_THROWS_AS(rho_of_eta(0.0, p3), numeric_domain_error);

    for (double eta0 : {2.5, 6.0, 20.0}) {
        const double rho = rho_of_eta(eta0, p3);
        CHECK(std::abs(eta_of_rho(rho, p3) - eta0) <= 1e-9 * eta0);
        const EquilibriumPoint pt = equilibrium_at(rho, p3);
        CHECK(std::abs(pt.eta - p3.alpha * rho * pt.S2) <= 1e-10 * pt.eta);
        CHECK(pt.lambda > 0.0);
        CHECK(pt.lambda < 1.0 - 1.0 / p3.n);
    }

    // n = 2, alpha = 4: rho -> 1 as eta -> 0+
    ModelParams p2{2, 4.0, 1.0, 0.5, 0.5};
    CHECK(rho_of_eta(1e-4, p2) == doctest::Approx(1.0).epsilon(1e-4));

    // partition-function identity at n = 3 (moderate eta sample)
    for (double eta : {0.5, 3.0, 12.0, 30.0}) {
        const double J = oracle::integrate(
            [eta](double z) { return std::exp(eta * (z * z - 1.0)); }, 0.0, 1.0, 1e-14);
        const double lhs = 3.0 / J;
        const double rhs = 3.0 + 2.0 * eta + 4.0 * eta * s2(eta, 3);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
    }
}

TEST_CASE("critical point") {
    ModelParams p2{2, 4.0, 1.0, 0.5, 0.5};
    const CriticalPoint cp2 = critical_point(p2);
    CHECK(std::abs(cp2.rho_star - 1.0) <= 1e-6);
    CHECK(cp2.eta_star == 0.0);

    ModelParams p3{3, 8.0, 1.0, 0.5, 0.5};
    const CriticalPoint cp3 = critical_point(p3);
    CHECK(cp3.eta_star > 0.0);
    CHECK(cp3.rho_star < 15.0 / (2.0 * p3.alpha)); // below the lambda -> 0 endpoint

    // rho(eta) is strictly increasing for n = 2
    double prev = 0.0;
    for (double eta : {0.01, 0.1, 1.0, 5.0, 20.0, 45.0}) {
        const double rho = rho_of_eta(eta, p2);
        CHECK(rho > prev);
        prev = rho;
    }

    // rho(eta) never dips below rho* on a dense grid
    for (int i = 0; i < 160; ++i) {
        const double eta = 1e-3 * std::pow(50.0 / 1e-3, i / 159.0);
        CHECK(rho_of_eta(eta, p2) >= cp2.rho_star - 1e-9);
        CHECK(rho_of_eta(eta, p3) >= cp3.rho_star - 1e-9);
    }
}

TEST_CASE("largest root is returned in the two-root regime") {
    ModelParams p3{3, 8.0, 1.0, 0.5, 0.5};
    const CriticalPoint cp = critical_point(p3);
    const double rho_hi = 15.0 / (2.0 * p3.alpha);
    const double rho = 0.5 * (cp.rho_star + rho_hi); // strictly between the bounds
    auto F = [&](double eta) { return eta - p3.alpha * rho * s2(eta, p3.n); };

    // bisection oracle on both brackets
    auto bisect = [&](double a, double b) {
        for (int i = 0; i < 200; ++i) {
            const double m = 0.5 * (a + b);
            if (F(a) * F(m) <= 0.0) b = m; else a = m;
        }
        return 0.5 * (a + b);
    };
    // F(0+) > 0, F < 0 between the roots, F > 0 beyond eta*
    double mid = cp.eta_star;
    REQUIRE(F(mid) < 0.0);
    const double lower = bisect(1e-9, mid);
    const double upper = bisect(mid, 100.0);
    const double got = eta_of_rho(rho, p3);
    CHECK(std::abs(got - upper) <= 1e-9 * upper);
    CHECK(got > lower);

    CHECK_THROWS_AS(eta_of_rho(0.9 * cp.rho_star, p3), no_branch_error);
    try {
        eta_of_rho(0.9 * cp.rho_star, p3);
    } catch (const no_branch_error& e) {
        CHECK(e.rho_star == doctest::Approx(cp.rho_star));
    }
}

TEST_CASE("fourth-moment coefficients") {
    for (int n : {2, 3, 4, 5, 6}) {
        for (double eta : {0.1, 1.0, 7.0, 21.0, 50.0}) {
            const ACoeffs a = a_coeffs(eta, n);
            const double S2 = s2(eta, n);
            CHECK(std::abs(a.a2 + a.a3 - S2 / (2.0 * eta)) <= 1e-10);
            CHECK(std::abs(a.a1 + (n + 4) * a.a2 - S2) <= 1e-10);
            CHECK(a.a2 > 0.0);
            CHECK(a.a2 < 1.0 / (n - 1.0));
            // cross-dimension form with the <1 - X^2> normalizer restored
            const double m1x2 = axisymmetric_average(
                [](double r) { return 1.0 - r * r; }, eta, *cached_rule(n, nodes_for(eta)));
            CHECK(std::abs(a.a2 - s2(eta, n + 2) * m1x2 / (n - 1.0)) <= 1e-10);
        }
    }
}

TEST_CASE("fourth-moment tensors") {
    oracle::Rng rng(42);
    for (int n : {2, 3, 4}) {
        const Vec Om = rng.unit_vector(n);

        // uniform state: T = 3 (Id x Id)_s / (n(n+2)), Q4 = 0
        const FourthMoments fm0 = fourth_moment_tensors(0.0, n, Om);
        const Mat Id = Mat::identity(n);
        const Tensor4 uni = (3.0 / (n * (n + 2.0))) * symmetrize(outer_mm(Id, Id));
        CHECK(max_abs(fm0.T - uni) <= 1e-12);
        CHECK(max_abs(fm0.Q4) <= 1e-12);

        for (double eta : {1.0, 5.0, 20.0}) {
            const FourthMoments fm = fourth_moment_tensors(eta, n, Om);
            const Tensor4 target = s4(eta, n) * uniaxial_tensor4(Om);
            CHECK(max_abs(fm.Q4 - target) <= 1e-10);
            // every two-index contraction of Q4 vanishes
            for (int p = 0; p < 4; ++p)
                for (int q = p + 1; q < 4; ++q)
                    CHECK(frobenius_norm(trace_pair(fm.Q4, p, q)) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(fourth_moment_tensors(1.0, 3, Vec{1.0, 1.0, 0.0}), invalid_parameter);
}
