#include "doi/quadrature.hpp"
#include "doi/errors.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

namespace doi {

namespace {

constexpr double pi = 3.14159265358979323846;

/// Jacobi polynomial P_m^{(a,b)} and its derivative at x, by the three-term
/// recurrence. Valid for a, b > -1.
void jacobi_eval(int m, double a, double b, double x, double& P, double& dP) {
    if (m == 0) { P = 1.0; dP = 0.0; return; }
    double p0 = 1.0, d0 = 0.0;
    double p1 = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
    double d1 = 0.5 * (a + b + 2.0);
    for (int k = 2; k <= m; ++k) {
        const double s = 2.0 * k + a + b;
        const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        const double c2 = (s - 1.0) * (a * a - b * b);
        const double c3 = (s - 1.0) * s * (s - 2.0);
        const double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        const double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        const double d2 = ((c2 + c3 * x) * d1 + c3 * p1 - c4 * d0) / c1;
        p0 = p1; p1 = p2;
        d0 = d1; d1 = d2;
    }
    P = p1;
    dP = d1;
}

} // namespace

double weight_mass_exact(int n) {
    // int (1-r^2)^((n-3)/2) dr = sqrt(pi) Gamma((n-1)/2) / Gamma(n/2)
    return std::sqrt(pi) * std::exp(std::lgamma(0.5 * (n - 1)) - std::lgamma(0.5 * n));
}

double QuadratureRule::weight_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

QuadratureRule build_rule(int n, int m) {
    if (n < 2) throw invalid_parameter("build_rule: dimension must be >= 2");
    if (m < 1) throw invalid_parameter("build_rule: node count must be >= 1");
    const double a = 0.5 * (n - 3); // = b, symmetric Jacobi weight

    QuadratureRule rule;
    rule.n = n;
    rule.m = m;
    rule.nodes.assign(m, 0.0);
    rule.weights.assign(m, 0.0);

    // w_i = C / ((1 - x_i^2) dP_m(x_i)^2),
    // C = 2^{2a+1} Gamma(m+a+1)^2 / (m! Gamma(m+2a+1))
    const double logC = (2.0 * a + 1.0) * std::log(2.0) + 2.0 * std::lgamma(m + a + 1.0) -
                        std::lgamma(m + 1.0) - std::lgamma(m + 2.0 * a + 1.0);
    const double C = std::exp(logC);

    // Roots are symmetric about 0; compute the positive half by Newton from
    // the classical cosine guesses and mirror.
    const int half = m / 2;
    for (int i = 1; i <= half; ++i) {
        double x = std::cos(pi * (0.5 * a + i - 0.25) / (0.5 * (1.0 + 2.0 * a) + m));
        double P = 0.0, dP = 0.0;
        for (int it = 0; it < 100; ++it) {
            jacobi_eval(m, a, a, x, P, dP);
            const double dx = P / dP;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        jacobi_eval(m, a, a, x, P, dP);
        const double w = C / ((1.0 - x * x) * dP * dP);
        rule.nodes[m - i] = x;
        rule.nodes[i - 1] = -x;
        rule.weights[m - i] = w;
        rule.weights[i - 1] = w;
    }
    if (m % 2 == 1) {
        double P = 0.0, dP = 0.0;
        jacobi_eval(m, a, a, 0.0, P, dP);
        rule.nodes[half] = 0.0;
        rule.weights[half] = C / (dP * dP);
    }
    return rule;
}

double gibbs_weighted_integral(const std::function<double(double)>& k, double eta,
                               const QuadratureRule& rule) {
    double s = 0.0;
    for (int i = 0; i < rule.m; ++i) {
        const double r = rule.nodes[i];
        const double kv = k(r);
        if (!std::isfinite(kv))
            throw numeric_domain_error("axisymmetric average: integrand not finite");
        s += rule.weights[i] * std::exp(eta * (r * r - 1.0)) * kv;
    }
    return s;
}

double axisymmetric_average(const std::function<double(double)>& k, double eta,
                            const QuadratureRule& rule) {
    if (eta < 0.0) throw invalid_parameter("axisymmetric average: eta must be >= 0");
    double num = 0.0, den = 0.0;
    for (int i = 0; i < rule.m; ++i) {
        const double r = rule.nodes[i];
        const double kv = k(r);
        if (!std::isfinite(kv))
            throw numeric_domain_error("axisymmetric average: integrand not finite");
        const double g = rule.weights[i] * std::exp(eta * (r * r - 1.0));
        num += g * kv;
        den += g;
    }
    return num / den;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
    struct Impl {
        const std::function<double(double)>& f;
        double recurse(double a, double fa, double m, double fm, double b, double fb,
                       double whole, double tol, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth >= 50 || std::abs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
                   recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
        }
    };
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Impl{f}.recurse(a, fa, m, fm, b, fb, whole, abs_tol, 0);
}

double sphere_surface(int n) {
    return 2.0 * std::pow(pi, 0.5 * n) / std::exp(std::lgamma(0.5 * n));
}

RadialKernel gaussian_kernel(int n, double sigma) {
    const double c = std::pow(2.0 * pi * sigma * sigma, -0.5 * n);
    const double s2 = sigma * sigma;
    return RadialKernel{
        [c, s2](double xi) { return c * std::exp(-0.5 * xi * xi / s2); },
        std::numeric_limits<double>::infinity(), n};
}

RadialKernel ball_kernel(int n, double radius) {
    const double vol = sphere_surface(n) / n * std::pow(radius, n);
    const double inv = 1.0 / vol;
    return RadialKernel{[inv, radius](double xi) { return xi <= radius ? inv : 0.0; },
                        radius, n};
}

RadialKernel rescaled_kernel(const RadialKernel& kernel, double R) {
    if (R <= 0.0) throw invalid_parameter("rescaled_kernel: R must be positive");
    auto base = kernel.k;
    const int n = kernel.n;
    const double scale = std::pow(R, -n);
    return RadialKernel{[base, R, scale](double xi) { return scale * base(xi / R); },
                        kernel.support * R, n};
}

double kernel_beta(const RadialKernel& kernel) {
    const int n = kernel.n;
    if (n < 2) throw invalid_parameter("kernel_beta: dimension must be >= 2");

    double ximax = kernel.support;
    if (!std::isfinite(ximax)) {
        // truncate where the second-moment integrand K(xi) xi^{n+1} is below 1e-16
        ximax = 1.0;
        int doublings = 0;
        while (kernel.k(ximax) * std::pow(ximax, n + 1) > 1e-16) {
            ximax *= 2.0;
            if (++doublings > 60)
                throw numeric_domain_error("kernel_beta: second moment appears divergent");
        }
    }

    const double surf = sphere_surface(n);
    const double mass =
        surf * adaptive_simpson([&](double xi) { return kernel.k(xi) * std::pow(xi, n - 1); },
                                0.0, ximax, 1e-12);
    if (std::abs(mass - 1.0) > 1e-8)
        throw numeric_domain_error("kernel_beta: kernel is not normalized to unit mass");

    const double second =
        surf * adaptive_simpson([&](double xi) { return kernel.k(xi) * std::pow(xi, n + 1); },
                                0.0, ximax, 1e-10);
    if (!std::isfinite(second) || second < 0.0)
        throw numeric_domain_error("kernel_beta: invalid second moment");
    return second / (2.0 * n);
}

std::shared_ptr<const QuadratureRule> cached_rule(int n, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto rule = std::make_shared<const QuadratureRule>(build_rule(n, m));
    cache.emplace(key, rule);
    return rule;
}

int nodes_for(double eta, int base) {
    const int extra = static_cast<int>(std::ceil(2.0 * std::max(0.0, eta)));
    const int m = base + extra;
    return m > 2048 ? 2048 : m;
}

} // namespace doi
