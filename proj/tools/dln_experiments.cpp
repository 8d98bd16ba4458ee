// Experiment harness CLI.  Each subcommand writes CSV artifacts (and, for
// flow runs, binary field snapshots) into its own subdirectory of the output
// root.  Bodies are deterministic for a fixed configuration and seed, so
// reruns are byte-identical.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dln/dln.hpp"

namespace fs = std::filesystem;

namespace {

std::string default_root() {
    const char* env = std::getenv("DLN_OUTPUT_ROOT");
    return env ? std::string(env) : std::string("dln-out");
}

fs::path prepare_dir(const std::string& root, const std::string& name) {
    fs::path dir = fs::path(root) / name;
    fs::create_directories(dir);
    return dir;
}

void write_error_record(const fs::path& dir, const std::string& subcommand,
                        const std::string& message) {
    std::ofstream out(dir / "error.json");
    out << "{\n  \"subcommand\": \"" << subcommand << "\",\n  \"error\": \"" << message
        << "\"\n}\n";
}

void echo_config(dln::CsvWriter& csv, const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) csv.comment(k + " = " + v);
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

void write_ledger_csv(const fs::path& path, const std::vector<dln::LedgerSample>& rows,
                      const std::vector<std::pair<std::string, std::string>>& cfg) {
    dln::CsvWriter csv(path.string());
    echo_config(csv, cfg);
    csv.header({"step", "t", "k", "E", "D", "eps_nu", "chi"});
    for (const auto& r : rows) csv.row(r.step, r.t, r.k, r.energy, r.dissipation, r.eps_nu, r.chi);
}

int cmd_convergence(double theta, int n, double nu, double T, int w, std::vector<double> ks,
                    bool linearly_implicit, const std::string& root) {
    const fs::path dir = prepare_dir(root, "convergence");
    try {
        dln::SolverConfig solver;
        solver.abs_tol = 1e-12;
        solver.max_iter = 50;
        const auto mode = linearly_implicit ? dln::ConvectionMode::linearly_implicit
                                            : dln::ConvectionMode::fully_implicit;
        const auto rows = dln::run_tg_convergence(theta, ks, n, nu, T, w, mode, solver);

        dln::CsvWriter csv((dir / "convergence.csv").string());
        csv.comment("Taylor-Green temporal convergence at fixed spectral resolution;");
        csv.comment("orders are the temporal rates, absolute errors are not comparable");
        csv.comment("to mixed space-time refinement studies.");
        echo_config(csv, {{"theta", fmt(theta)},
                          {"n", std::to_string(n)},
                          {"nu", fmt(nu)},
                          {"T", fmt(T)},
                          {"wavenumber", std::to_string(w)},
                          {"mode", linearly_implicit ? "linearly_implicit" : "fully_implicit"}});
        csv.header({"k", "err_inf", "err_l2", "R_inf", "R_l2"});
        for (const auto& r : rows) csv.row(r.k, r.err_inf, r.err_l2, r.order_inf, r.order_l2);
        std::cout << "wrote " << (dir / "convergence.csv").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        write_error_record(dir, "convergence", e.what());
        std::cerr << "convergence failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_stability_region(double theta, int samples, const std::string& root) {
    const fs::path dir = prepare_dir(root, "stability-region");
    try {
        const dln::BoundaryLocus locus = dln::root_locus(theta, samples);
        dln::CsvWriter csv((dir / "locus.csv").string());
        echo_config(csv, {{"theta", fmt(theta)}, {"samples", std::to_string(samples)}});
        csv.header({"phi", "re", "im", "pole"});
        for (const auto& s : locus.samples)
            csv.row(s.phi, s.z.real(), s.z.imag(), s.pole ? 1 : 0);
        std::cout << "wrote " << (dir / "locus.csv").string() << " (min Re over non-poles: "
                  << locus.min_re() << ")\n";
        return 0;
    } catch (const std::exception& e) {
        write_error_record(dir, "stability-region", e.what());
        std::cerr << "stability-region failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_energy_compare(const std::string& schedule, double k_const, double T, double theta, int n,
                       double nu, double amplitude, int force_mode, bool linearly_implicit,
                       const std::string& root) {
    const fs::path dir = prepare_dir(root, "energy-compare");
    try {
        std::vector<double> steps;
        if (schedule == "increasing")
            steps = dln::increasing_schedule(T);
        else if (schedule == "sinusoidal")
            steps = dln::sinusoidal_schedule(T);
        else if (schedule == "constant")
            steps = dln::constant_schedule(k_const, T);
        else
            throw std::invalid_argument("unknown schedule: " + schedule);

        dln::ForcedSetup setup{n, nu, amplitude, force_mode};
        dln::SolverConfig solver;
        solver.abs_tol = 1e-10;
        solver.max_iter = 50;
        const auto mode = linearly_implicit ? dln::ConvectionMode::linearly_implicit
                                            : dln::ConvectionMode::fully_implicit;
        const auto result = dln::run_energy_compare(setup, theta, steps, mode, solver);

        const std::vector<std::pair<std::string, std::string>> cfg = {
            {"schedule", schedule}, {"T", fmt(T)},
            {"theta", fmt(theta)},  {"n", std::to_string(n)},
            {"nu", fmt(nu)},        {"amplitude", fmt(amplitude)},
            {"force_mode", std::to_string(force_mode)},
            {"mode", linearly_implicit ? "linearly_implicit" : "fully_implicit"}};
        write_ledger_csv(dir / "dln_ledger.csv", result.dln, cfg);
        write_ledger_csv(dir / "bdf2_ledger.csv", result.bdf2, cfg);
        std::cout << "wrote " << (dir / "dln_ledger.csv").string() << " and "
                  << (dir / "bdf2_ledger.csv").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        write_error_record(dir, "energy-compare", e.what());
        std::cerr << "energy-compare failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_adaptive(double theta, double delta, double k_min, double k_max, double T, int n,
                 double nu, double amplitude, int force_mode, double k0, bool linearly_implicit,
                 const std::string& root) {
    const fs::path dir = prepare_dir(root, "adaptive");
    try {
        dln::ControllerConfig cfg;
        cfg.delta = delta;
        cfg.k_min = k_min;
        cfg.k_max = k_max;
        dln::ForcedSetup setup{n, nu, amplitude, force_mode};
        dln::SolverConfig solver;
        solver.abs_tol = 1e-10;
        solver.max_iter = 50;
        const auto mode = linearly_implicit ? dln::ConvectionMode::linearly_implicit
                                            : dln::ConvectionMode::fully_implicit;
        const dln::AdaptiveRun run =
            dln::run_forced_adaptive(setup, theta, cfg, T, k0, mode, solver);

        dln::CsvWriter csv((dir / "adaptive_ledger.csv").string());
        echo_config(csv, {{"theta", fmt(theta)},
                          {"delta", fmt(delta)},
                          {"k_min", fmt(k_min)},
                          {"k_max", fmt(k_max)},
                          {"T", fmt(T)},
                          {"n", std::to_string(n)},
                          {"nu", fmt(nu)},
                          {"amplitude", fmt(amplitude)},
                          {"force_mode", std::to_string(force_mode)},
                          {"k0", fmt(k0)}});
        csv.header({"step", "t", "k", "chi", "verdict", "E", "D"});
        for (const auto& r : run.records)
            csv.row(r.step, r.t, r.k, r.chi, dln::verdict_name(r.verdict), r.ledger.energy,
                    r.ledger.dissipation);
        dln::SpectralGrid grid(n);
        dln::write_snapshot((dir / "final_state.snap").string(), grid, run.final_curr, nu);
        std::cout << "wrote " << (dir / "adaptive_ledger.csv").string() << " ("
                  << run.records.size() << " accepted steps, " << run.total_attempts
                  << " solves)\n";
        return 0;
    } catch (const std::exception& e) {
        write_error_record(dir, "adaptive", e.what());
        std::cerr << "adaptive failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_fuzz(unsigned seed, int trials, const std::string& root) {
    const fs::path dir = prepare_dir(root, "g-identity-fuzz");
    try {
        const dln::FuzzReport report = dln::g_identity_fuzz(seed, trials, 8, true);
        dln::CsvWriter csv((dir / "fuzz.csv").string());
        echo_config(csv, {{"seed", std::to_string(seed)}, {"trials", std::to_string(trials)}});
        csv.header({"trial", "theta", "eps", "relative_gap"});
        for (std::size_t i = 0; i < report.samples.size(); i++) {
            const auto& s = report.samples[i];
            csv.row(i, s.theta, s.eps, s.gap);
        }
        std::cout << "max relative identity gap over " << trials << " trials: "
                  << report.max_relative_gap << "\n";
        return report.max_relative_gap <= 1e-12 ? 0 : 2;
    } catch (const std::exception& e) {
        write_error_record(dir, "g-identity-fuzz", e.what());
        std::cerr << "g-identity-fuzz failed: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-leg DLN time integration experiments"};
    app.set_config("--config", "", "Read options from an INI/TOML config file");
    app.require_subcommand(1);

    std::string root = default_root();
    app.add_option("--out", root, "Output root directory (default: $DLN_OUTPUT_ROOT or dln-out)")
        ->capture_default_str();

    // convergence
    auto* conv = app.add_subcommand("convergence", "Taylor-Green temporal convergence table");
    double c_theta = 0.5, c_nu = 0.01, c_T = 1.0;
    int c_n = 64, c_w = 1;
    std::vector<double> c_ks = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    bool c_linear = false;
    conv->add_option("--theta", c_theta, "Method parameter in [0,1]")->capture_default_str();
    conv->add_option("--n", c_n, "Grid size (power of two)")->capture_default_str();
    conv->add_option("--nu", c_nu, "Viscosity")->capture_default_str();
    conv->add_option("--T", c_T, "Final time")->capture_default_str();
    conv->add_option("--wavenumber", c_w, "Taylor-Green wavenumber")->capture_default_str();
    conv->add_option("--steps", c_ks, "Step sizes, coarse to fine")->capture_default_str();
    conv->add_flag("--linearly-implicit", c_linear, "Extrapolated convecting field");

    // stability-region
    auto* stab = app.add_subcommand("stability-region", "Root-locus stability boundary");
    double s_theta = 0.5;
    int s_samples = 10000;
    stab->add_option("--theta", s_theta, "Method parameter in [0,1]")->capture_default_str();
    stab->add_option("--samples", s_samples, "Samples on the unit circle")->capture_default_str();

    // energy-compare
    auto* ec = app.add_subcommand("energy-compare", "DLN vs BDF2 ledgers over one schedule");
    std::string e_schedule = "increasing";
    double e_k = 0.05, e_T = 40.0, e_theta = 0.5, e_nu = 0.1, e_amp = 0.1;
    int e_n = 32, e_fmode = 2;
    bool e_linear = false;
    ec->add_option("--schedule", e_schedule, "increasing | sinusoidal | constant")
        ->capture_default_str();
    ec->add_option("--k", e_k, "Step size for the constant schedule")->capture_default_str();
    ec->add_option("--T", e_T, "Final time")->capture_default_str();
    ec->add_option("--theta", e_theta, "Method parameter in [0,1]")->capture_default_str();
    ec->add_option("--n", e_n, "Grid size")->capture_default_str();
    ec->add_option("--nu", e_nu, "Viscosity")->capture_default_str();
    ec->add_option("--amplitude", e_amp, "Stirring amplitude")->capture_default_str();
    ec->add_option("--force-mode", e_fmode, "Stirring wavenumber")->capture_default_str();
    ec->add_flag("--linearly-implicit", e_linear, "Extrapolated convecting field");

    // adaptive
    auto* ad = app.add_subcommand("adaptive", "Dissipation-ratio adaptive forced run");
    double a_theta = 0.667, a_delta = 0.002, a_kmin = 0.01, a_kmax = 1.6, a_T = 63.7, a_nu = 0.1,
           a_amp = 0.1, a_k0 = 0.01;
    int a_n = 32, a_fmode = 2;
    bool a_linear = false;
    ad->add_option("--theta", a_theta, "Method parameter in [0,1]")->capture_default_str();
    ad->add_option("--delta", a_delta, "Dissipation-ratio tolerance")->capture_default_str();
    ad->add_option("--k-min", a_kmin, "Step floor")->capture_default_str();
    ad->add_option("--k-max", a_kmax, "Step cap")->capture_default_str();
    ad->add_option("--T", a_T, "Final time")->capture_default_str();
    ad->add_option("--n", a_n, "Grid size")->capture_default_str();
    ad->add_option("--nu", a_nu, "Viscosity")->capture_default_str();
    ad->add_option("--amplitude", a_amp, "Stirring amplitude")->capture_default_str();
    ad->add_option("--force-mode", a_fmode, "Stirring wavenumber")->capture_default_str();
    ad->add_option("--k0", a_k0, "Startup step")->capture_default_str();
    ad->add_flag("--linearly-implicit", a_linear, "Extrapolated convecting field");

    // g-identity-fuzz
    auto* fz = app.add_subcommand("g-identity-fuzz", "Randomized G-stability identity check");
    unsigned f_seed = 20260824;
    int f_trials = 100000;
    fz->add_option("--seed", f_seed, "RNG seed")->capture_default_str();
    fz->add_option("--trials", f_trials, "Number of trials")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (conv->parsed())
        return cmd_convergence(c_theta, c_n, c_nu, c_T, c_w, c_ks, c_linear, root);
    if (stab->parsed()) return cmd_stability_region(s_theta, s_samples, root);
    if (ec->parsed())
        return cmd_energy_compare(e_schedule, e_k, e_T, e_theta, e_n, e_nu, e_amp, e_fmode,
                                  e_linear, root);
    if (ad->parsed())
        return cmd_adaptive(a_theta, a_delta, a_kmin, a_kmax, a_T, a_n, a_nu, a_amp, a_fmode, a_k0,
                            a_linear, root);
    if (fz->parsed()) return cmd_fuzz(f_seed, f_trials, root);
    return 1;
}
