#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// The library's contract: pure reentrant operations, shared immutable
// quadrature rules, independent solves safe to run concurrently.

#include "doi/equilibria.hpp"
#include "doi/gci.hpp"
#include "doi/kinetic.hpp"
#include "doi/leslie.hpp"
#include "doi/quadrature.hpp"

#include <cmath>
#include <future>
#include <vector>

using namespace doi;

TEST_CASE("concurrent solves agree with serial results") {
    struct Job {
        int n;
        double eta;
    };
    std::vector<Job> jobs;
    for (int n : {2, 3, 4, 5})
        for (double eta : {0.5, 2.0, 8.0, 25.0}) jobs.push_back({n, eta});

    // serial references
    std::vector<double> ref_h, ref_s2, ref_c;
    for (const Job& j : jobs) {
        const GciSolution h = solve_h(j.eta, j.n);
        ref_h.push_back(h(0.6));
        ref_s2.push_back(s2(j.eta, j.n));
        ref_c.push_back(constant_c_lambda0(j.eta, j.n, h));
    }

    // the same set, four ways in parallel, against shared cached rules
    std::vector<std::future<std::vector<double>>> futs;
    for (int rep = 0; rep < 4; ++rep) {
        futs.push_back(std::async(std::launch::async, [&jobs]() {
            std::vector<double> out;
            for (const Job& j : jobs) {
                const GciSolution h = solve_h(j.eta, j.n);
                out.push_back(h(0.6));
                out.push_back(s2(j.eta, j.n));
                out.push_back(constant_c_lambda0(j.eta, j.n, h));
            }
            return out;
        }));
    }
    for (auto& f : futs) {
        const std::vector<double> got = f.get();
        for (size_t i = 0; i < jobs.size(); ++i) {
            CHECK(got[3 * i] == ref_h[i]);
            CHECK(got[3 * i + 1] == ref_s2[i]);
            CHECK(got[3 * i + 2] == ref_c[i]);
        }
    }
}

TEST_CASE("independent simulations and branch lookups in parallel") {
    ModelParams P{2, 6.0, 1.0, 0.5, 0.4};
    auto run = [&P](double theta0) {
        const double eta = eta_of_rho(1.0, P);
        SimConfig cfg;
        cfg.params = P;
        cfg.eps = 1.0;
        cfg.gradu = Mat(2, 2);
        cfg.dt = 2e-3;
        cfg.tmax = 2.0;
        cfg.with_free_energy = false;
        const Trajectory t = simulate(gibbs_state(1.0, eta, theta0, 32), cfg);
        return t.points.back().mom.theta;
    };
    const double a0 = run(0.2), b0 = run(-0.9);
    auto fa = std::async(std::launch::async, run, 0.2);
    auto fb = std::async(std::launch::async, run, -0.9);
    CHECK(fa.get() == a0);
    CHECK(fb.get() == b0);
}
