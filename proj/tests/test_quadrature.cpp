#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doi/errors.hpp"
#include "doi/quadrature.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace doi;

namespace {
// exact int r^{2j} (1-r^2)^a dr = Gamma(j+1/2) Gamma(a+1) / Gamma(j+a+3/2)
double even_moment_exact(int j, double a) {
    return std::exp(std::lgamma(j + 0.5) + std::lgamma(a + 1.0) -
                    std::lgamma(j + a + 1.5));
}
} // namespace

TEST_CASE("rule mass and polynomial exactness across dimensions") {
    for (int n : {2, 3, 4, 5, 6, 7, 8}) {
        for (int m : {4, 16, 64, 256}) {
            const QuadratureRule rule = build_rule(n, m);
            const double mass = weight_mass_exact(n);
            CHECK(std::abs(rule.weight_mass() - mass) <= 1e-12 * mass);
            const double a = 0.5 * (n - 3);
            for (int j = 1; j <= std::min(m - 1, 12); ++j) {
                double s = 0.0;
                for (int q = 0; q < rule.m; ++q)
                    s += rule.weights[q] * std::pow(rule.nodes[q], 2 * j);
                const double exact = even_moment_exact(j, a);
                CHECK(std::abs(s - exact) <= 1e-12 * mass);
            }
        }
    }
}

TEST_CASE("specific low-order values") {
    CHECK(build_rule(3, 5).weight_mass() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(build_rule(2, 9).weight_mass() ==
          doctest::Approx(3.14159265358979323846).epsilon(1e-14));
    const QuadratureRule r32 = build_rule(3, 2);
    double s = 0.0;
    for (int q = 0; q < r32.m; ++q) s += r32.weights[q] * r32.nodes[q] * r32.nodes[q];
    CHECK(s == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(build_rule(1, 8), invalid_parameter);
    CHECK_THROWS_AS(build_rule(3, 0), invalid_parameter);
}

TEST_CASE("axisymmetric averages") {
    auto rule = cached_rule(3, default_nodes);
    CHECK(axisymmetric_average([](double) { return 1.0; }, 3.7, *rule) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(axisymmetric_average([](double r) { return r * r; }, 0.0, *rule) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    // P2 against the bisection oracle at eta = 5
    auto p2 = [](double r) { return 0.5 * (3.0 * r * r - 1.0); };
    const double mine = axisymmetric_average(p2, 5.0, *rule);
    const double ref = oracle::gibbs_average(p2, 5.0, 3);
    CHECK(std::abs(mine - ref) <= 1e-10);

    CHECK_THROWS_AS(axisymmetric_average(
                        [](double r) { return r == r ? std::nan("") : 0.0; }, 1.0, *rule),
                    numeric_domain_error);
}

TEST_CASE("doubling stability and parity") {
    auto k = [](double r) { return std::cos(3.0 * r) + r * r * r * r; };
    for (int n : {2, 3, 5}) {
        for (double eta : {0.0, 1.0, 10.0, 50.0, 100.0}) {
            const double v1 = axisymmetric_average(k, eta, *cached_rule(n, nodes_for(eta)));
            const double v2 =
                axisymmetric_average(k, eta, *cached_rule(n, 2 * nodes_for(eta)));
            CHECK(std::abs(v1 - v2) <= 1e-12);
        }
        // odd integrands average to zero by node symmetry
        auto odd = [](double r) { return r * std::exp(r * r) - 5.0 * r * r * r; };
        for (double eta : {0.0, 2.0, 25.0})
            CHECK(std::abs(axisymmetric_average(odd, eta, *cached_rule(n, 96))) <= 1e-13);
    }
}

TEST_CASE("kernel second moments") {
    for (int n : {2, 3, 5}) {
        CHECK(kernel_beta(gaussian_kernel(n)) == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(kernel_beta(ball_kernel(n)) ==
              doctest::Approx(1.0 / (2.0 * (n + 2))).epsilon(1e-8));
    }
    // shrinking the interaction range sends beta ~ R^2 to zero
    const RadialKernel base = ball_kernel(3);
    double prev = kernel_beta(base);
    for (double R : {0.5, 0.1, 0.01}) {
        const double b = kernel_beta(rescaled_kernel(base, R));
        CHECK(b == doctest::Approx(R * R * prev).epsilon(1e-7));
    }
    CHECK(kernel_beta(rescaled_kernel(base, 1e-4)) <= 1e-8);
}

TEST_CASE("kernel error paths") {
    // unnormalized kernel
    RadialKernel bad = ball_kernel(3);
    auto k = bad.k;
    bad.k = [k](double xi) { return 2.0 * k(xi); };
    CHECK_THROWS_AS(kernel_beta(bad), numeric_domain_error);

    // normalizable kernel whose second moment diverges: K ~ (1+xi)^{-(n+1)}
    const int n = 3;
    const double mass = oracle::integrate(
        [n](double xi) { return std::pow(xi, n - 1.0) / std::pow(1.0 + xi, n + 1.0); },
        0.0, 1e9, 1e-10);
    const double c = 1.0 / (sphere_surface(n) * mass);
    RadialKernel heavy{
        [c, n](double xi) { return c / std::pow(1.0 + xi, n + 1.0); },
        std::numeric_limits<double>::infinity(), n};
    CHECK_THROWS_AS(kernel_beta(heavy), numeric_domain_error);
}

TEST_CASE("adaptive simpson sanity") {
    const double v =
        adaptive_simpson([](double x) { return std::exp(-x) * x * x; }, 0.0, 40.0, 1e-12);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}
