#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toruslab/birkhoff.hpp"
#include "toruslab/config.hpp"
#include "toruslab/diophantine.hpp"
#include "toruslab/errors.hpp"
#include "toruslab/experiment.hpp"
#include "toruslab/rng.hpp"
#include "toruslab/serialization.hpp"
#include "toruslab/steepness.hpp"

namespace tl = toruslab;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::string preset_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    bool json = false;
    bool strict = false;
};

std::string out_path(const GlobalOpts& g, const std::string& file) {
    return (std::filesystem::path(g.out_dir) / file).string();
}

tl::ScalingFit fit_from_json(const nlohmann::json& j) {
    tl::ScalingFit f;
    try {
        f.kind = j.at("fit_kind").get<std::string>();
        f.u = j.at("fitted_u").get<double>();
        f.C = j.at("fitted_C").get<double>();
        f.points_used = j.at("points_used").get<int>();
        f.censored_count = j.at("censored_count").get<int>();
        f.extrapolative = j.at("extrapolative").get<bool>();
        f.censored_consistent = j.at("censored_consistent").get<bool>();
        f.residual_mean = j.at("residual_mean").get<double>();
        for (const auto& pj : j.at("points")) {
            tl::FitPoint p;
            p.r = pj.at("r").get<double>();
            p.median_time = pj.at("median_time").get<double>();
            p.censored = pj.at("censored").get<bool>();
            p.used = pj.at("used").get<bool>();
            f.points.push_back(p);
        }
    } catch (const nlohmann::json::exception& e) {
        throw tl::ConfigError(std::string("malformed fit record: ") + e.what());
    }
    return f;
}

tl::SweepResult summary_from_json(const nlohmann::json& j) {
    tl::SweepResult s;
    try {
        s.preset_name = j.at("preset").get<std::string>();
        s.master_seed = j.at("master_seed").get<std::uint64_t>();
        for (const auto& aj : j.at("aggregates")) {
            tl::RAggregate a;
            a.r = aj.at("r").get<double>();
            a.ensemble = aj.at("ensemble").get<int>();
            a.censored = aj.at("censored").get<int>();
            a.median_time = aj.at("median_time").get<double>();
            a.median_censored = aj.at("median_censored").get<bool>();
            a.min_time = aj.at("min_time").get<double>();
            a.max_time = aj.at("max_time").get<double>();
            s.aggregates.push_back(a);
        }
        s.exp_fit = fit_from_json(j.at("exp_fit"));
        s.double_exp_fit = fit_from_json(j.at("double_exp_fit"));
    } catch (const nlohmann::json::exception& e) {
        throw tl::ConfigError(std::string("malformed sweep summary: ") + e.what());
    }
    return s;
}

void print_verdict(const tl::SteepnessVerdict& v) {
    std::cout << v.kind << ": " << (v.accepted ? "ACCEPTED" : "REFUSED") << "\n";
    if (v.witness) {
        std::cout << "  witness: " << v.witness->detail << " (value "
                  << v.witness->value << ", threshold " << v.witness->threshold
                  << ")\n";
    }
}

int run_dio(const GlobalOpts& g, std::vector<double> omega,
            const std::string& preset_name, double tau, int K, double gamma,
            const std::vector<double>& box) {
    if (!preset_name.empty()) {
        auto preset = tl::load_preset(preset_name, g.preset_dir);
        omega = preset.omega;
        if (tau < 0.0) tau = preset.tau;
    }
    if (omega.empty())
        throw tl::ConfigError("dio needs --omega or --preset");
    int n = static_cast<int>(omega.size());
    if (tau < 0.0) tau = n - 1;
    if (K <= 0) K = tl::default_scan_depth(n);

    nlohmann::json out;
    if (!box.empty() || gamma > 0.0) {
        if (box.size() != 2 * omega.size())
            throw tl::ConfigError("--box needs lo,hi per frequency component");
        if (!(gamma > 0.0))
            throw tl::ConfigError("membership needs a positive --gamma");
        std::vector<std::pair<double, double>> b;
        for (std::size_t i = 0; i < omega.size(); ++i)
            b.emplace_back(box[2 * i], box[2 * i + 1]);
        auto report = tl::omega_set_membership(omega, b, gamma, tau, K);
        out = tl::membership_report_to_json(report);
        std::cout << "member: " << (report.member ? "yes" : "no")
                  << "  gamma_scan: " << report.gamma_scan
                  << "  boundary_margin: " << report.boundary_margin << "\n";
    } else {
        auto report = tl::gamma_estimate(omega, tau, K);
        out = tl::diophantine_report_to_json(report);
        std::cout << "gamma_est: " << report.gamma_est << "  raw_min: "
                  << report.raw_min << "  scanned: " << report.scanned_count
                  << "\n";
    }
    tl::write_json_file(out_path(g, "dio_report.json"), out);
    if (g.json) std::cout << out.dump(2) << "\n";
    return 0;
}

int run_bnf(const GlobalOpts& g, const std::string& preset_name,
            const std::string& series_file, std::vector<double> omega,
            int order, tl::BnfBudgets budgets) {
    tl::FourierTaylorSeries H{1, 0, 0};
    if (!preset_name.empty()) {
        auto preset = tl::load_preset(preset_name, g.preset_dir);
        H = preset.hamiltonian;
        if (omega.empty()) omega = preset.omega;
        if (budgets.tau < 0.0 && preset.tau >= 0.0) budgets.tau = preset.tau;
    } else if (!series_file.empty()) {
        H = tl::series_from_json(tl::read_json_file(series_file));
    } else {
        throw tl::ConfigError("bnf needs --preset or --series");
    }
    if (omega.empty()) throw tl::ConfigError("bnf needs a frequency vector");

    auto result = tl::bnf(H, omega, order, budgets);
    auto out = tl::normal_form_to_json(result);
    tl::write_json_file(out_path(g, "normal_form.json"), out);
    std::cout << "order: " << result.order_m
              << "  generators: " << result.generators.size()
              << "  residual_max: " << result.residual_max << "\n";
    for (const auto& [ord, norm] : result.remainder_norm_by_order)
        std::cout << "  remainder order " << ord << ": " << norm << "\n";
    if (g.json) std::cout << out.dump(2) << "\n";
    return 0;
}

int run_steep_check(const GlobalOpts& g, const std::string& poly_file,
                    double rho, double C, double delta,
                    tl::SamplingConfig scfg) {
    auto poly = tl::polynomial_from_json(tl::read_json_file(poly_file));
    scfg.seed = g.seed;
    auto verdict = tl::stably_steep_check(poly, rho, C, delta, scfg);
    auto out = tl::steepness_verdict_to_json(verdict);
    tl::write_json_file(out_path(g, "steep_verdict.json"), out);
    print_verdict(verdict);
    if (g.json) std::cout << out.dump(2) << "\n";
    if (!verdict.accepted && g.strict) return 4;
    return 0;
}

int run_kolmogorov(const GlobalOpts& g, const std::string& poly_file,
                   const std::vector<double>& omega,
                   std::vector<double> center, double radius, int samples,
                   double det_floor) {
    auto poly = tl::polynomial_from_json(tl::read_json_file(poly_file));
    int n = poly.dimension();
    if (center.empty()) center.assign(static_cast<std::size_t>(n), 0.0);
    if (static_cast<int>(center.size()) != n)
        throw tl::ConfigError("--center length does not match the polynomial");
    if (samples < 0) throw tl::ConfigError("--samples must be >= 0");

    tl::SmoothFunction h =
        omega.empty() ? tl::make_smooth(poly) : tl::make_smooth(omega, poly);
    std::vector<std::vector<double>> points{center};
    tl::SplitMix64 rng(tl::derive_seed(g.seed, 0xD37));
    for (int s = 0; s < samples; ++s) {
        auto dir = rng.sphere(n);
        std::vector<double> p = center;
        for (int j = 0; j < n; ++j)
            p[static_cast<std::size_t>(j)] += radius * dir[static_cast<std::size_t>(j)];
        points.push_back(std::move(p));
    }
    auto verdict = tl::kolmogorov_check(h, points, det_floor);
    auto out = tl::steepness_verdict_to_json(verdict);
    tl::write_json_file(out_path(g, "kolmogorov_verdict.json"), out);
    print_verdict(verdict);
    if (g.json) std::cout << out.dump(2) << "\n";
    if (!verdict.accepted && g.strict) return 4;
    return 0;
}

int run_exponents(const GlobalOpts& g, int n, double alpha, double tau,
                  double p, double beta, const std::vector<double>& r_list,
                  double fit_c) {
    if (n < 1) throw tl::ConfigError("--n must be >= 1");
    double tau_eff = tau < 0.0 ? n - 1.0 : tau;
    double p_eff = p < 1.0 ? tl::m0(n) - 1.0 : p;

    nlohmann::json out;
    out["n"] = n;
    out["alpha"] = alpha;
    out["tau"] = tau_eff;
    out["m0"] = tl::m0(n);
    out["predicted_u"] = tl::double_exp_exponent(alpha, tau_eff);
    out["kam_exponent_bound"] = tl::kam_exponent_bound(alpha, n);
    auto nek = tl::nekhoroshev_exponents(n, p_eff, beta);
    out["nekhoroshev"] = {{"n", nek.n},
                          {"p", nek.p},
                          {"beta", nek.beta},
                          {"a", nek.a},
                          {"radius_exponent", nek.radius_exponent},
                          {"time_exponent", nek.time_exponent},
                          {"threshold_exponent", nek.threshold_exponent}};
    if (!r_list.empty()) {
        nlohmann::json rows = nlohmann::json::array();
        for (double r : r_list) {
            auto pred = tl::stability_time_prediction(fit_c, out["predicted_u"].get<double>(), r);
            nlohmann::json row;
            row["r"] = r;
            row["loglog_T"] = pred.loglog_T;
            if (std::isfinite(pred.log_T)) row["log_T"] = pred.log_T;
            if (std::isfinite(pred.T)) row["T"] = pred.T;
            rows.push_back(std::move(row));
        }
        out["predictions"] = std::move(rows);
    }
    tl::write_json_file(out_path(g, "exponents.json"), out);
    std::cout << "predicted_u: " << out["predicted_u"].get<double>()
              << "  kam_bound: " << out["kam_exponent_bound"].get<double>()
              << "  m0: " << tl::m0(n) << "\n";
    if (g.json) std::cout << out.dump(2) << "\n";
    return 0;
}

int run_generic_scan(const GlobalOpts& g, tl::GenericityScanConfig gcfg,
                     const std::string& base_file) {
    gcfg.seed = g.seed;
    std::optional<tl::ActionPolynomial> base;
    if (!base_file.empty())
        base = tl::polynomial_from_json(tl::read_json_file(base_file));
    auto result = tl::genericity_scan(gcfg, base ? &*base : nullptr);

    nlohmann::json out;
    out["trials"] = result.trials;
    out["accepted"] = result.accepted;
    out["acceptance_rate"] = result.acceptance_rate;
    out["seed"] = result.seed;
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : result.records) {
        nlohmann::json rj;
        rj["trial"] = rec.trial;
        rj["seed"] = rec.seed;
        rj["accepted"] = rec.accepted;
        rj["rho"] = rec.rho;
        rj["C"] = rec.C;
        rj["delta"] = rec.delta;
        records.push_back(std::move(rj));
    }
    out["records"] = std::move(records);
    tl::write_json_file(out_path(g, "generic_scan.json"), out);
    std::cout << "accepted " << result.accepted << " / " << result.trials
              << " (rate " << result.acceptance_rate << ")\n";
    if (g.json) std::cout << out.dump(2) << "\n";
    return 0;
}

tl::ExperimentConfig resolve_with_flags(const GlobalOpts& g,
                                        const std::string& preset_name,
                                        const std::vector<double>& r_grid,
                                        int ensemble, double budget,
                                        double dt) {
    auto preset = tl::load_preset(preset_name, g.preset_dir);
    tl::ConfigFile config;
    bool have_config = !g.config_path.empty();
    if (have_config) config = tl::ConfigFile::parse_file(g.config_path);
    auto cfg = tl::resolve_experiment_config(preset, have_config ? &config : nullptr,
                                             g.seed, g.out_dir, g.threads);
    if (!r_grid.empty()) cfg.sweep.r_grid = r_grid;
    if (ensemble > 0) cfg.sweep.ensemble = ensemble;
    if (budget > 0) cfg.sweep.budget_steps = static_cast<long long>(budget);
    if (dt >= 0.0) cfg.sweep.dt = dt;
    // Flag overrides go through the validator a second time.
    tl::Preset merged = cfg.preset;
    merged.sweep = cfg.sweep;
    return tl::resolve_experiment_config(merged, nullptr, cfg.master_seed,
                                         cfg.out_dir, cfg.sweep.threads);
}

int run_escape_sweep_cmd(const GlobalOpts& g, const std::string& preset_name,
                         const std::vector<double>& r_grid, int ensemble,
                         double budget, double dt) {
    auto cfg = resolve_with_flags(g, preset_name, r_grid, ensemble, budget, dt);
    auto result = tl::run_escape_sweep(cfg);

    std::vector<nlohmann::json> rows;
    rows.reserve(result.records.size());
    for (const auto& rec : result.records)
        rows.push_back(tl::escape_record_to_json(rec));
    tl::write_jsonl_file((std::filesystem::path(cfg.out_dir) / "escape_records.jsonl").string(), rows);
    auto summary = tl::sweep_summary_to_json(result);
    tl::write_json_file((std::filesystem::path(cfg.out_dir) / "sweep_summary.json").string(), summary);
    tl::write_text_file((std::filesystem::path(cfg.out_dir) / "sweep_plot.csv").string(),
                        tl::sweep_plot_csv(result));

    for (const auto& a : result.aggregates)
        std::cout << "r " << a.r << ": median " << a.median_time << " ("
                  << a.censored << "/" << a.ensemble << " censored)\n";
    std::cout << "exp-law u: "
              << (result.exp_fit.kind == "insufficient" ? std::string("n/a")
                                                        : std::to_string(result.exp_fit.u))
              << "  double-exp-law u: "
              << (result.double_exp_fit.kind == "insufficient"
                      ? std::string("n/a")
                      : std::to_string(result.double_exp_fit.u))
              << "\n";
    if (g.json) std::cout << summary.dump(2) << "\n";
    return 0;
}

int run_pipeline_cmd(const GlobalOpts& g, const std::string& preset_name,
                     int order) {
    auto preset = tl::load_preset(preset_name, g.preset_dir);
    tl::ConfigFile config;
    bool have_config = !g.config_path.empty();
    if (have_config) config = tl::ConfigFile::parse_file(g.config_path);
    auto cfg = tl::resolve_experiment_config(preset, have_config ? &config : nullptr,
                                             g.seed, g.out_dir, g.threads);
    auto report = tl::run_pipeline(cfg, order, cfg.out_dir);
    for (const auto& st : report.stages) {
        std::cout << st.name << ": " << st.status;
        if (!st.detail.empty()) std::cout << " (" << st.detail << ")";
        std::cout << "\n";
    }
    std::cout << (report.all_ok ? "pipeline ok" : "pipeline completed with failures")
              << "\n";
    if (g.json) std::cout << tl::pipeline_report_to_json(report).dump(2) << "\n";
    if (!report.all_ok && g.strict) return 4;
    return 0;
}

int run_plot_data(const GlobalOpts& g, std::string summary_path,
                  const std::string& csv_out) {
    if (summary_path.empty()) summary_path = out_path(g, "sweep_summary.json");
    auto s = summary_from_json(tl::read_json_file(summary_path));
    std::string csv = tl::sweep_plot_csv(s);
    if (csv_out.empty()) {
        std::cout << csv;
    } else {
        tl::write_text_file(csv_out, csv);
        std::cout << "wrote " << csv_out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for torus stability experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "TOML config file");
    app.add_option("--seed", g.seed, "master seed (nonzero overrides config)");
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (sweeps)");
    app.add_option("--preset-dir", g.preset_dir, "extra preset search directory");
    app.add_flag("--json", g.json, "print the full JSON result to stdout");
    app.add_flag("--strict", g.strict, "exit 4 on refused verdicts");

    auto* dio = app.add_subcommand("dio", "Diophantine constant scan");
    std::vector<double> dio_omega, dio_box;
    std::string dio_preset;
    double dio_tau = -1.0, dio_gamma = 0.0;
    int dio_K = 0;
    dio->add_option("--omega", dio_omega, "frequency vector")->delimiter(',');
    dio->add_option("--preset", dio_preset, "take the frequency from a preset");
    dio->add_option("--tau", dio_tau, "Diophantine exponent (default n-1)");
    dio->add_option("-K,--depth", dio_K, "max |k|_1 to scan");
    dio->add_option("--gamma", dio_gamma, "membership threshold");
    dio->add_option("--box", dio_box, "membership box lo,hi per component")->delimiter(',');

    auto* bnf_cmd = app.add_subcommand("bnf", "finite-order normal form");
    std::string bnf_preset, bnf_series;
    std::vector<double> bnf_omega;
    int bnf_order = 4;
    tl::BnfBudgets budgets;
    bnf_cmd->add_option("--preset", bnf_preset, "preset name");
    bnf_cmd->add_option("--series", bnf_series, "Hamiltonian series JSON file");
    bnf_cmd->add_option("--omega", bnf_omega, "frequency vector")->delimiter(',');
    bnf_cmd->add_option("--order", bnf_order, "normalization order m")->capture_default_str();
    bnf_cmd->add_option("--k-work", budgets.k_work, "working Fourier truncation");
    bnf_cmd->add_option("--m-work", budgets.m_work, "working Taylor truncation");
    bnf_cmd->add_option("--divisor-floor", budgets.divisor_floor, "small-divisor floor");
    bnf_cmd->add_option("--tau", budgets.tau, "exponent for the automatic floor");
    bnf_cmd->add_option("--tol", budgets.tol_hom, "relative homological tolerance");

    auto* steep = app.add_subcommand("steep-check", "stably-steep polynomial check");
    std::string steep_poly;
    double steep_rho = 0.0, steep_C = 0.0, steep_delta = 0.0;
    tl::SamplingConfig scfg;
    steep->add_option("--poly", steep_poly, "polynomial JSON file")->required();
    steep->add_option("--rho", steep_rho, "perturbation ball radius")->required();
    steep->add_option("-C,--constant", steep_C, "steepness constant")->required();
    steep->add_option("--delta", steep_delta, "xi range upper end")->required();
    steep->add_option("--subspaces", scfg.subspaces_per_dim, "random subspaces per dimension");
    steep->add_option("--perturbations", scfg.perturbations, "random perturbation draws");
    steep->add_option("--xi-points", scfg.xi_points, "xi grid size");
    steep->add_option("--eta-points", scfg.eta_points, "eta grid size");
    steep->add_option("--multistarts", scfg.multistarts, "sphere-min starts");

    auto* kol = app.add_subcommand("kolmogorov", "nondegeneracy check");
    std::string kol_poly;
    std::vector<double> kol_omega, kol_center;
    double kol_radius = 0.1, kol_floor = 1e-12;
    int kol_samples = 16;
    kol->add_option("--poly", kol_poly, "polynomial JSON file")->required();
    kol->add_option("--omega", kol_omega, "add a linear part omega . I")->delimiter(',');
    kol->add_option("--center", kol_center, "sample center")->delimiter(',');
    kol->add_option("--radius", kol_radius, "sample radius")->capture_default_str();
    kol->add_option("--samples", kol_samples, "random sample count")->capture_default_str();
    kol->add_option("--det-floor", kol_floor, "|det Hessian| floor")->capture_default_str();

    auto* expo = app.add_subcommand("exponents", "stability exponent calculator");
    int expo_n = 0;
    double expo_alpha = 1.0, expo_tau = -1.0, expo_p = 0.0, expo_beta = 1.0,
           expo_fit_c = 1.0;
    std::vector<double> expo_r;
    expo->add_option("--n", expo_n, "degrees of freedom")->required();
    expo->add_option("--alpha", expo_alpha, "Gevrey exponent of the Hamiltonian")->capture_default_str();
    expo->add_option("--tau", expo_tau, "Diophantine exponent (default n-1)");
    expo->add_option("--p", expo_p, "steepness index (default m0(n)-1)");
    expo->add_option("--beta", expo_beta, "Gevrey exponent of the steep integrable part")->capture_default_str();
    expo->add_option("--r", expo_r, "radii for time predictions")->delimiter(',');
    expo->add_option("--fit-c", expo_fit_c, "prefactor C for predictions")->capture_default_str();

    auto* scan = app.add_subcommand("generic-scan", "random polynomial steepness census");
    tl::GenericityScanConfig gcfg;
    std::string scan_base;
    scan->add_option("--trials", gcfg.trials, "number of random polynomials")->capture_default_str();
    scan->add_option("--n", gcfg.n, "dimension")->capture_default_str();
    scan->add_option("--degree", gcfg.degree, "polynomial degree")->capture_default_str();
    scan->add_option("--coeff-box", gcfg.coeff_box, "coefficient range")->capture_default_str();
    scan->add_option("--rho-grid", gcfg.rho_grid, "rho candidates")->delimiter(',');
    scan->add_option("--c-grid", gcfg.C_grid, "C candidates")->delimiter(',');
    scan->add_option("--delta-grid", gcfg.delta_grid, "delta candidates")->delimiter(',');
    scan->add_option("--subspaces", gcfg.sampling.subspaces_per_dim, "random subspaces per dimension");
    scan->add_option("--perturbations", gcfg.sampling.perturbations, "random perturbation draws");
    scan->add_option("--xi-points", gcfg.sampling.xi_points, "xi grid size");
    scan->add_option("--eta-points", gcfg.sampling.eta_points, "eta grid size");
    scan->add_option("--multistarts", gcfg.sampling.multistarts, "sphere-min starts");
    scan->add_option("--base", scan_base, "base polynomial JSON file");

    auto* sweep = app.add_subcommand("escape-sweep", "ensemble escape-time experiment");
    std::string sweep_preset;
    std::vector<double> sweep_r;
    int sweep_ensemble = 0;
    double sweep_budget = 0.0, sweep_dt = -1.0;
    sweep->add_option("--preset", sweep_preset, "preset name")->required();
    sweep->add_option("--r-grid", sweep_r, "initial radii, strictly decreasing")->delimiter(',');
    sweep->add_option("--ensemble", sweep_ensemble, "members per radius");
    sweep->add_option("--budget", sweep_budget, "step budget per member");
    sweep->add_option("--dt", sweep_dt, "time step (0 = heuristic)");

    auto* pipe = app.add_subcommand("pipeline", "full analysis pipeline for a preset");
    std::string pipe_preset;
    int pipe_order = 4;
    pipe->add_option("--preset", pipe_preset, "preset name")->required();
    pipe->add_option("--order", pipe_order, "normal form order")->capture_default_str();

    auto* plot = app.add_subcommand("plot-data", "CSV plot data from a sweep summary");
    std::string plot_summary, plot_csv;
    plot->add_option("--summary", plot_summary, "sweep_summary.json path");
    plot->add_option("--csv", plot_csv, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dio->parsed())
            return run_dio(g, dio_omega, dio_preset, dio_tau, dio_K, dio_gamma, dio_box);
        if (bnf_cmd->parsed())
            return run_bnf(g, bnf_preset, bnf_series, bnf_omega, bnf_order, budgets);
        if (steep->parsed())
            return run_steep_check(g, steep_poly, steep_rho, steep_C, steep_delta, scfg);
        if (kol->parsed())
            return run_kolmogorov(g, kol_poly, kol_omega, kol_center, kol_radius,
                                  kol_samples, kol_floor);
        if (expo->parsed())
            return run_exponents(g, expo_n, expo_alpha, expo_tau, expo_p, expo_beta,
                                 expo_r, expo_fit_c);
        if (scan->parsed()) return run_generic_scan(g, gcfg, scan_base);
        if (sweep->parsed())
            return run_escape_sweep_cmd(g, sweep_preset, sweep_r, sweep_ensemble,
                                        sweep_budget, sweep_dt);
        if (pipe->parsed()) return run_pipeline_cmd(g, pipe_preset, pipe_order);
        if (plot->parsed()) return run_plot_data(g, plot_summary, plot_csv);
    } catch (const tl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tl::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
