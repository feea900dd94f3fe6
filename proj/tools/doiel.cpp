// doiel: nematic-polymer transport coefficients and the spectral circle
// simulator behind them. Subcommands: coeffs, branch, gci, simulate, verify.

#include "doi/equilibria.hpp"
#include "doi/errors.hpp"
#include "doi/gci.hpp"
#include "doi/kinetic.hpp"
#include "doi/leslie.hpp"
#include "doi/quadrature.hpp"
#include "doi/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric error
constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_numeric = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Options {
    doi::ModelParams params{3, 8.0, 1.0, 0.5, 0.5};
    double eps = 1e-3;
    double shear = 1.0;
    int K = 48;
    double dt = 0.0;
    double tmax = 10.0;
    double eta_min = 0.5, eta_max = 20.0;
    int eta_points = 16;
    double rho_min = 0.0, rho_max = 0.0; // sweep by rho when rho_max > 0
    int rho_points = 16;
    std::string out;
    std::string format = "csv";
    unsigned long long seed = 12345;
    std::string init = "gibbs"; // or "random"
    double init_theta = 0.1;
    double init_amp = 0.05;
    int gci_points = 129; // profile sample count for the gci table
    bool iso_debug = false;
    bool inject_parodi_fault = false;
    int only = 0;
};

/// One tabular result: a comment anchor describing the column blocks by their
/// defining formulas, the column names, and numeric rows.
struct Table {
    std::string anchor;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void csv(std::ostream& os) const {
        os << "# " << anchor << '\n';
        for (size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? ',' : '\n');
        for (const auto& row : rows)
            for (size_t i = 0; i < row.size(); ++i)
                os << fmt(row[i]) << (i + 1 < row.size() ? ',' : '\n');
    }

    json to_json() const {
        json j;
        j["anchor"] = anchor;
        j["columns"] = columns;
        j["rows"] = rows;
        return j;
    }
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--n", o.params.n, "dimension (>= 2)");
    cmd->add_option("--alpha", o.params.alpha, "alignment interaction strength");
    cmd->add_option("--Lambda", o.params.Lambda, "shape parameter in [-1,1]");
    cmd->add_option("--zeta", o.params.zeta, "polymer viscous coefficient");
    cmd->add_option("--beta", o.params.beta, "nonlocality moment");
    cmd->add_option("--eps", o.eps, "Deborah number");
    cmd->add_option("--shear", o.shear, "imposed shear rate");
    cmd->add_option("--K", o.K, "spectral truncation / basis size");
    cmd->add_option("--dt", o.dt, "time step (0 = default)");
    cmd->add_option("--tmax", o.tmax, "final time");
    cmd->add_option("--out", o.out, "output path ('-' = stdout)");
    cmd->add_option("--format", o.format, "csv | json");
    cmd->add_option("--seed", o.seed, "random seed");
}

std::ostream& open_sink(const Options& o, std::ofstream& file) {
    if (o.out.empty() || o.out == "-") return std::cout;
    file.open(o.out);
    if (!file) throw std::runtime_error("cannot open output file " + o.out);
    return file;
}

std::vector<double> grid(double lo, double hi, int count) {
    std::vector<double> g;
    if (count <= 1) {
        g.push_back(lo);
        return g;
    }
    const bool log_ok = lo > 0.0 && hi > lo;
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        g.push_back(log_ok ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    return g;
}

int cmd_coeffs(Options& o) {
    Table t;
    t.anchor =
        "transport coefficients along the nematic branch eta = alpha rho S2(eta); "
        "c: rotational mobility; a1..a6: director-stress viscosities with "
        "a6-a5 = a2+a3; gamma1 = a3-a2 = Lambda S2/c; gamma2 = a2+a3 = -Lambda S2";
    t.columns = {"n",  "alpha", "Lambda", "zeta", "rho", "eta",    "S2",    "S4", "c",
                 "a1", "a2",    "a3",     "a4",   "a5",  "a6", "gamma1", "gamma2"};
    std::vector<double> etas;
    if (o.rho_max > 0.0) {
        for (double rho : grid(o.rho_min, o.rho_max, o.rho_points))
            etas.push_back(doi::eta_of_rho(rho, o.params));
    } else {
        etas = grid(o.eta_min, o.eta_max, o.eta_points);
    }
    for (double eta : etas) {
        doi::LeslieCoefficients k;
        if (o.iso_debug) {
            const double rho = eta / (o.params.alpha * doi::s2(eta, o.params.n));
            const double c = doi::constant_c(eta, o.params.n, o.params.Lambda,
                                             doi::solve_h(eta, o.params.n));
            k = doi::assemble_leslie(o.params, rho, eta, 0.0, 0.0, c);
        } else {
            k = doi::leslie_coefficients_at_eta(o.params, eta);
        }
        t.rows.push_back({static_cast<double>(o.params.n), o.params.alpha,
                          o.params.Lambda, o.params.zeta, k.rho, k.eta, k.S2, k.S4, k.c,
                          k.a1, k.a2, k.a3, k.a4, k.a5, k.a6, k.gamma1, k.gamma2});
    }
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    if (o.format == "json")
        os << t.to_json().dump(2) << '\n';
    else
        t.csv(os);
    return exit_ok;
}

int cmd_branch(Options& o) {
    Table t;
    t.anchor = "nematic branch rho(lambda): lambda = (n-1) S2(eta)/n, rho = "
               "eta/(alpha S2(eta)); stable_flag marks the largest-root side "
               "(all of it at n = 2, eta >= eta* for n >= 3)";
    t.columns = {"n", "alpha", "lambda", "eta", "rho", "stable_flag"};
    const doi::CriticalPoint cp = doi::critical_point(o.params);
    for (double eta : grid(o.eta_min, o.eta_max, o.eta_points)) {
        const bool stable = o.params.n == 2 ? true : eta >= cp.eta_star;
        t.rows.push_back({static_cast<double>(o.params.n), o.params.alpha,
                          doi::lambda_of_eta(eta, o.params.n), eta,
                          doi::rho_of_eta(eta, o.params), stable ? 1.0 : 0.0});
    }
    json summary;
    summary["rho_star"] = cp.rho_star;
    summary["eta_star"] = cp.eta_star;
    summary["lambda_star"] = cp.lambda_star;
    summary["n"] = o.params.n;
    summary["alpha"] = o.params.alpha;

    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    if (o.format == "json") {
        json j = t.to_json();
        j["summary"] = summary;
        os << j.dump(2) << '\n';
    } else {
        t.csv(os);
        if (!o.out.empty() && o.out != "-") {
            std::ofstream side(o.out + ".summary.json");
            side << summary.dump(2) << '\n';
        }
    }
    return exit_ok;
}

int cmd_gci(Options& o) {
    Table prof;
    prof.anchor = "invariant profile h(r) of the director balance (odd, h <= 0 "
                  "for r >= 0)";
    prof.columns = {"n", "eta", "r", "h"};
    Table sum;
    sum.anchor = "profile moments: gamma1t, gamma2t from <h r (1-r^2)>-type "
                 "averages; gamma3t = (1 - n/eta) gamma1t - 2 gamma2t = "
                 "rho S2/(2 eta); c_over_Lambda = (n-1) S2 / <<g dU0/dtheta>>";
    sum.columns = {"n", "eta", "c_over_Lambda", "gamma1t", "gamma2t", "gamma3t",
                   "residual"};
    for (double eta : grid(o.eta_min, o.eta_max, o.eta_points)) {
        const doi::GciSolution h = doi::solve_h(eta, o.params.n, o.K);
        for (int i = 0; i < o.gci_points; ++i) {
            const double r = -1.0 + 2.0 * (i + 0.5) / o.gci_points;
            prof.rows.push_back({static_cast<double>(o.params.n), eta, r, h(r)});
        }
        const double rho = eta / (o.params.alpha * doi::s2(eta, o.params.n));
        const doi::GammaTildes g = doi::gamma_tildes(eta, o.params.n, rho, h);
        sum.rows.push_back({static_cast<double>(o.params.n), eta,
                            doi::constant_c_lambda0(eta, o.params.n, h), g.g1, g.g2,
                            g.g3, h.residual});
    }
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    if (o.format == "json") {
        json j;
        j["profile"] = prof.to_json();
        j["summary"] = sum.to_json();
        os << j.dump(2) << '\n';
    } else {
        prof.csv(os);
        if (!o.out.empty() && o.out != "-") {
            std::ofstream side(o.out + ".summary.csv");
            sum.csv(side);
        } else {
            sum.csv(os);
        }
    }
    return exit_ok;
}

int cmd_simulate(Options& o) {
    if (o.params.n != 2) {
        std::cerr << "simulate: the spectral simulator requires --n 2\n";
        return exit_usage;
    }
    doi::SimConfig cfg;
    cfg.params = o.params;
    cfg.eps = o.eps;
    cfg.gradu = doi::Mat(2, 2);
    cfg.gradu(1, 0) = o.shear;
    cfg.dt = o.dt;
    cfg.tmax = o.tmax;

    const double rho = o.rho_max > 0.0 ? o.rho_max : 1.0;
    const double eta = doi::eta_of_rho(rho, o.params);
    doi::OrientationState s0;
    if (o.init == "gibbs") {
        s0 = doi::gibbs_state(rho, eta, o.init_theta, o.K);
    } else if (o.init == "random") {
        std::mt19937_64 gen(o.seed);
        auto uni = [&gen]() {
            return 2.0 * (static_cast<double>(gen()) / 18446744073709551616.0) - 1.0;
        };
        s0 = doi::uniform_state(rho, o.K);
        for (int k = 1; k <= o.K; ++k)
            s0.c[k] = rho * o.init_amp * std::pow(0.6, k) *
                      std::complex<double>(uni(), uni());
    } else {
        std::cerr << "simulate: unknown --init '" << o.init << "'\n";
        return exit_usage;
    }

    const doi::Trajectory traj = doi::simulate(s0, cfg);

    Table t;
    t.anchor = "homogeneous kinetic trajectory: Q = traceless second moment, "
               "theta = director angle (canonical sign), S2_f = 2 lambda, A0 = "
               "free energy (non-increasing without flow), gci_residual = "
               "|int C(f) psi| / (|C| |psi|)";
    t.columns = {"t",    "rho", "Qxx", "Qxy",         "lambda",
                 "theta", "S2_f", "A0",  "dissipation", "gci_residual"};
    for (const auto& p : traj.points) {
        const double res = doi::gci_residual(p.state, o.params.alpha);
        t.rows.push_back({p.t, p.mom.rho, p.mom.Q(0, 0), p.mom.Q(0, 1), p.mom.lambda,
                          p.mom.theta, p.mom.chi, p.A0, p.dissipation, res});
    }
    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    if (o.format == "json")
        os << t.to_json().dump(2) << '\n';
    else
        t.csv(os);
    return exit_ok;
}

int cmd_verify(Options& o) {
    doi::VerifyOptions vo;
    vo.seed = o.seed;
    vo.inject_parodi_fault = o.inject_parodi_fault;
    vo.only_criterion = o.only;
    const std::vector<doi::CheckResult> results = doi::run_verification(vo);

    json j;
    j["seed"] = o.seed;
    bool all_pass = true;
    for (const auto& r : results) {
        json c;
        c["criterion"] = r.criterion;
        c["name"] = r.name;
        c["detail"] = r.detail;
        c["tolerance"] = r.tolerance;
        c["measured"] = r.measured;
        c["pass"] = r.pass;
        c["seconds"] = r.seconds;
        j["checks"].push_back(c);
        all_pass = all_pass && r.pass;
        std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.criterion << " " << r.name
                  << " (measured " << r.measured << ", tol " << r.tolerance << ", "
                  << r.seconds << " s)\n";
    }
    j["all_pass"] = all_pass;

    std::ofstream file;
    std::ostream& os = open_sink(o, file);
    os << j.dump(2) << '\n';
    return all_pass ? exit_ok : exit_verify_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transport coefficients of nematic polymer suspensions and the "
                 "spectral kinetic simulator validating them"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI config file: one section per subcommand, keys match the flags");
    Options o;

    CLI::App* coeffs = app.add_subcommand(
        "coeffs", "table of c, a1..a6, gamma1, gamma2 along the branch");
    add_common(coeffs, o);
    coeffs->add_option("--eta-min", o.eta_min, "smallest eta of the sweep");
    coeffs->add_option("--eta-max", o.eta_max, "largest eta of the sweep");
    coeffs->add_option("--eta-points", o.eta_points, "sweep size");
    coeffs->add_option("--rho-min", o.rho_min, "smallest rho (rho sweep)");
    coeffs->add_option("--rho-max", o.rho_max, "largest rho (enables rho sweep)");
    coeffs->add_option("--rho-points", o.rho_points, "rho sweep size");
    coeffs->add_flag("--isotropic-debug", o.iso_debug,
                     "force S2 = S4 = 0 (only a4 survives)");

    CLI::App* branch = app.add_subcommand("branch", "branch diagram rho(lambda)");
    add_common(branch, o);
    branch->add_option("--eta-min", o.eta_min, "smallest eta sampled");
    branch->add_option("--eta-max", o.eta_max, "largest eta sampled");
    branch->add_option("--eta-points", o.eta_points, "sample count");

    CLI::App* gci = app.add_subcommand("gci", "invariant profile h and its moments");
    add_common(gci, o);
    gci->add_option("--eta-min", o.eta_min, "smallest eta");
    gci->add_option("--eta-max", o.eta_max, "largest eta");
    gci->add_option("--eta-points", o.eta_points, "sweep size");
    gci->add_option("--profile-points", o.gci_points, "h samples per eta");

    CLI::App* simulate = app.add_subcommand("simulate", "homogeneous kinetic run (n = 2)");
    add_common(simulate, o);
    simulate->add_option("--rho-max", o.rho_max, "density of the run (default 1)");
    simulate->add_option("--init", o.init, "initial data: gibbs | random");
    simulate->add_option("--init-theta", o.init_theta, "initial director angle");
    simulate->add_option("--init-amp", o.init_amp, "random-mode amplitude");

    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify, o);
    verify->add_option("--only", o.only, "run a single criterion (1..13)");
    verify->add_flag("--inject-parodi-fault", o.inject_parodi_fault,
                     "mutation self-test: perturb a6 so criterion 1 must fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (coeffs->parsed()) return cmd_coeffs(o);
        if (branch->parsed()) return cmd_branch(o);
        if (gci->parsed()) return cmd_gci(o);
        if (simulate->parsed()) return cmd_simulate(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const doi::error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
