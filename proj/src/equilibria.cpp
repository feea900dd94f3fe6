#include "doi/equilibria.hpp"
#include "doi/errors.hpp"
#include "doi/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>

namespace doi {

namespace {

double p2(double x, int n) { return (n * x * x - 1.0) / (n - 1.0); }

double p4(double x, int n) {
    const double x2 = x * x;
    return (3.0 - 6.0 * (n + 2) * x2 + (n + 2.0) * (n + 4.0) * x2 * x2) /
           ((n - 1.0) * (n + 1.0));
}

const QuadratureRule& rule_for(double eta, int n) {
    static thread_local std::shared_ptr<const QuadratureRule> last;
    const int m = nodes_for(eta);
    if (!last || last->n != n || last->m != m) last = cached_rule(n, m);
    return *last;
}

void check_eta(double eta) {
    if (!(eta >= 0.0)) throw invalid_parameter("eta must be >= 0");
}

} // namespace

void ModelParams::validate() const {
    if (n < 2) throw invalid_parameter("ModelParams: n must be >= 2");
    if (!(alpha > 0.0)) throw invalid_parameter("ModelParams: alpha must be > 0");
    if (!(Lambda >= -1.0 && Lambda <= 1.0))
        throw invalid_parameter("ModelParams: Lambda must lie in [-1, 1]");
    if (!(zeta >= 0.0)) throw invalid_parameter("ModelParams: zeta must be >= 0");
    if (!(beta >= 0.0)) throw invalid_parameter("ModelParams: beta must be >= 0");
}

double s2(double eta, int n) {
    check_eta(eta);
    if (eta == 0.0) return 0.0;
    return axisymmetric_average([n](double r) { return p2(r, n); }, eta, rule_for(eta, n));
}

double s4(double eta, int n) {
    check_eta(eta);
    if (eta == 0.0) return 0.0;
    return axisymmetric_average([n](double r) { return p4(r, n); }, eta, rule_for(eta, n));
}

double s2_prime(double eta, int n) {
    check_eta(eta);
    const QuadratureRule& rule = rule_for(eta, n);
    const double p2x2 =
        axisymmetric_average([n](double r) { return p2(r, n) * r * r; }, eta, rule);
    const double mp2 = axisymmetric_average([n](double r) { return p2(r, n); }, eta, rule);
    const double mx2 = axisymmetric_average([](double r) { return r * r; }, eta, rule);
    return p2x2 - mp2 * mx2;
}

double rho_of_eta(double eta, const ModelParams& params) {
    params.validate();
    if (eta <= 0.0)
        throw numeric_domain_error("rho_of_eta: eta must be positive (S2(0) = 0)");
    return eta / (params.alpha * s2(eta, params.n));
}

double drho_deta(double eta, const ModelParams& params) {
    const double S2 = s2(eta, params.n);
    const double S2p = s2_prime(eta, params.n);
    return (S2 - eta * S2p) / (params.alpha * S2 * S2);
}

double lambda_of_eta(double eta, int n) { return (n - 1.0) * s2(eta, n) / n; }

namespace {
CriticalPoint critical_point_impl(const ModelParams& params);
} // namespace

CriticalPoint critical_point(const ModelParams& params) {
    // rho(eta) depends on (n, alpha) only; memoize across the many callers.
    static std::mutex mu;
    static std::map<std::pair<int, std::uint64_t>, CriticalPoint> memo;
    params.validate();
    const auto key = std::make_pair(params.n, std::bit_cast<std::uint64_t>(params.alpha));
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    CriticalPoint cp = critical_point_impl(params);
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, cp);
    return cp;
}

namespace {

CriticalPoint critical_point_impl(const ModelParams& params) {
    const int n = params.n;
    if (n == 2) {
        // rho(eta) -> rho* as eta -> 0+; Richardson extrapolation on the
        // linear-in-eta error at eta = 1e-3, 5e-4, 2.5e-4.
        const double r1 = rho_of_eta(1e-3, params);
        const double r2 = rho_of_eta(5e-4, params);
        const double r3 = rho_of_eta(2.5e-4, params);
        const double b1 = 2.0 * r2 - r1;
        const double b2 = 2.0 * r3 - r2;
        return CriticalPoint{(4.0 * b2 - b1) / 3.0, 0.0, 0.0};
    }
    // Interior minimum of rho(eta): log-grid scan, then golden section.
    const int grid = 240;
    const double lo = 1e-3, hi = 60.0;
    double best_rho = rho_of_eta(lo, params);
    int best_i = 0;
    for (int i = 1; i < grid; ++i) {
        const double eta = lo * std::pow(hi / lo, static_cast<double>(i) / (grid - 1));
        const double rho = rho_of_eta(eta, params);
        if (rho < best_rho) { best_rho = rho; best_i = i; }
    }
    if (best_i == 0 || best_i == grid - 1)
        throw iteration_limit_error(
            "critical_point: no interior bracket for the minimum of rho(eta) in [" +
            std::to_string(lo) + ", " + std::to_string(hi) + "]");
    double a = lo * std::pow(hi / lo, static_cast<double>(best_i - 1) / (grid - 1));
    double b = lo * std::pow(hi / lo, static_cast<double>(best_i + 1) / (grid - 1));
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = rho_of_eta(x1, params), f2 = rho_of_eta(x2, params);
    int iters = 0;
    while (b - a > 1e-10 && ++iters < 400) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = rho_of_eta(x1, params);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = rho_of_eta(x2, params);
        }
    }
    if (iters >= 400)
        throw iteration_limit_error("critical_point: golden section did not converge, bracket [" +
                                    std::to_string(a) + ", " + std::to_string(b) + "]");
    const double eta_star = 0.5 * (a + b);
    const double rho_star = rho_of_eta(eta_star, params);
    return CriticalPoint{rho_star, eta_star,
                         (n - 1.0) * eta_star / (n * params.alpha * rho_star)};
}

} // namespace

double eta_of_rho(double rho, const ModelParams& params) {
    params.validate();
    const CriticalPoint cp = critical_point(params);
    if (!(rho > cp.rho_star))
        throw no_branch_error("eta_of_rho: rho <= rho*, no nematic branch (rho* = " +
                                  std::to_string(cp.rho_star) + ")",
                              cp.rho_star);
    const double arho = params.alpha * rho;
    const int n = params.n;
    auto F = [&](double eta) { return eta - arho * s2(eta, n); };
    auto Fp = [&](double eta) { return 1.0 - arho * s2_prime(eta, n); };

    // Geometric scan; F > 0 for eta > alpha*rho since S2 < 1.
    const double lo = 1e-6;
    double hi = 1.2 * arho + 1.0;
    while (F(hi) <= 0.0) hi *= 2.0;
    const int grid = 400;
    double last_lo = -1.0, last_hi = -1.0;
    double prev_eta = lo, prev_f = F(lo);
    for (int i = 1; i < grid; ++i) {
        const double eta = lo * std::pow(hi / lo, static_cast<double>(i) / (grid - 1));
        const double f = F(eta);
        if (prev_f <= 0.0 && f > 0.0) { last_lo = prev_eta; last_hi = eta; }
        if (prev_f > 0.0 && f <= 0.0) { last_lo = eta; last_hi = -1.0; }
        prev_eta = eta;
        prev_f = f;
    }
    if (last_lo < 0.0 || last_hi < 0.0)
        throw no_branch_error("eta_of_rho: no upward crossing of eta = alpha rho S2(eta)",
                              cp.rho_star);

    // Bisection to locate the largest root, then Newton polish.
    double a = last_lo, b = last_hi;
    for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, b); ++it) {
        const double mid = 0.5 * (a + b);
        if (F(mid) <= 0.0) a = mid; else b = mid;
    }
    double eta = 0.5 * (a + b);
    for (int it = 0; it < 40; ++it) {
        const double step = F(eta) / Fp(eta);
        eta -= step;
        if (!(eta > a - (b - a) && eta < b + (b - a))) { eta = 0.5 * (a + b); break; }
        if (std::abs(step) < 1e-14 * std::max(1.0, eta)) break;
    }
    return eta;
}

EquilibriumPoint equilibrium_at(double rho, const ModelParams& params) {
    const double eta = eta_of_rho(rho, params);
    const int n = params.n;
    return EquilibriumPoint{rho, eta, s2(eta, n), s4(eta, n),
                            (n - 1.0) * eta / (n * params.alpha * rho)};
}

ACoeffs a_coeffs(double eta, int n) {
    check_eta(eta);
    const QuadratureRule& rule = rule_for(eta, n);
    auto avg = [&](auto&& f) { return axisymmetric_average(f, eta, rule); };
    const double x4 = avg([](double r) { return r * r * r * r; });
    const double x2m = avg([](double r) { return r * r * (1.0 - r * r); });
    const double m2 = avg([](double r) {
        const double u = 1.0 - r * r;
        return u * u;
    });
    ACoeffs c;
    c.a1 = x4 - 6.0 * x2m / (n - 1.0) + 3.0 * m2 / ((n - 1.0) * (n + 1.0));
    c.a2 = x2m / (n - 1.0) - m2 / ((n - 1.0) * (n + 1.0));
    c.a3 = m2 / ((n - 1.0) * (n + 1.0));
    return c;
}

Mat uniaxial_tensor2(const Vec& Omega) {
    const int n = static_cast<int>(Omega.size());
    Mat A = outer(Omega, Omega);
    for (int i = 0; i < n; ++i) A(i, i) -= 1.0 / n;
    return A;
}

Tensor4 uniaxial_tensor4(const Vec& Omega) {
    const int n = static_cast<int>(Omega.size());
    const Mat Id = Mat::identity(n);
    const Mat OO = outer(Omega, Omega);
    Tensor4 A = outer4(Omega);
    A = A - (6.0 / (n + 4.0)) * symmetrize(outer_mm(OO, Id));
    A = A + (3.0 / ((n + 2.0) * (n + 4.0))) * symmetrize(outer_mm(Id, Id));
    return A;
}

FourthMoments fourth_moment_tensors(double eta, int n, const Vec& Omega) {
    check_eta(eta);
    if (static_cast<int>(Omega.size()) != n)
        throw invalid_parameter("fourth_moment_tensors: Omega has wrong dimension");
    if (std::abs(norm(Omega) - 1.0) > 1e-10)
        throw invalid_parameter("fourth_moment_tensors: Omega must be a unit vector");

    const ACoeffs c = a_coeffs(eta, n);
    const Mat Id = Mat::identity(n);
    const Mat OO = outer(Omega, Omega);

    FourthMoments out;
    out.T = c.a1 * outer4(Omega) + 6.0 * c.a2 * symmetrize(outer_mm(OO, Id)) +
            3.0 * c.a3 * symmetrize(outer_mm(Id, Id));

    // Q4 = T - 6/(n+4) (Q (x) Id)_s - 3/(n(n+2)) (Id (x) Id)_s, Q = S2 A_Omega
    const double S2 = s2(eta, n);
    Mat Q = S2 * uniaxial_tensor2(Omega);
    out.Q4 = out.T - (6.0 / (n + 4.0)) * symmetrize(outer_mm(Q, Id)) -
             (3.0 / (n * (n + 2.0))) * symmetrize(outer_mm(Id, Id));
    return out;
}

} // namespace doi
