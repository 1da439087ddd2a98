#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "toruslab/config.hpp"
#include "toruslab/errors.hpp"
#include "toruslab/experiment.hpp"
#include "toruslab/rng.hpp"
#include "toruslab/serialization.hpp"
#include "toruslab/steepness.hpp"

using namespace toruslab;
namespace fs = std::filesystem;

namespace {

RAggregate agg_at(double r, double median, bool censored = false) {
    RAggregate a;
    a.r = r;
    a.ensemble = 8;
    a.median_time = median;
    a.median_censored = censored;
    a.min_time = median;
    a.max_time = median;
    a.censored = censored ? 8 : 0;
    return a;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const PipelineStage* find_stage(const PipelineReport& rep, const std::string& name) {
    for (const auto& st : rep.stages)
        if (st.name == name) return &st;
    return nullptr;
}

ExperimentConfig quick_config(const std::string& preset_name,
                              std::uint64_t seed, const std::string& out_dir) {
    Preset preset = load_preset(preset_name, TORUSLAB_PRESET_DIR);
    ExperimentConfig cfg;
    cfg.preset = preset;
    cfg.sweep = preset.sweep;
    cfg.master_seed = seed;
    cfg.out_dir = out_dir;
    return cfg;
}

}  // namespace

TEST_CASE("exp-law fit recovers exact synthetic data") {
    const double u = 0.7, C = 2.0;
    std::vector<RAggregate> aggs;
    for (double r : {0.4, 0.2, 0.1, 0.05})
        aggs.push_back(agg_at(r, std::exp(std::exp(std::log(C) + u * std::log(1.0 / r)))));

    auto fit = fit_scaling_law(aggs, "exp-law");
    CHECK(fit.kind == "exp-law");
    CHECK(fit.u == doctest::Approx(u).epsilon(1e-10));
    CHECK(fit.C == doctest::Approx(C).epsilon(1e-10));
    CHECK(fit.points_used == 4);
    CHECK(!fit.extrapolative);
    CHECK(fit.censored_consistent);
    CHECK(std::abs(fit.residual_mean) < 1e-10);
}

TEST_CASE("double-exp fit on the canonical synthetic law gives u = 1/2") {
    std::vector<RAggregate> aggs;
    for (double r : {0.4, 0.2, 0.1, 0.05})
        aggs.push_back(agg_at(r, std::exp(std::exp(std::pow(r, -0.5)))));

    auto fit = fit_scaling_law(aggs, "double-exp-law");
    CHECK(fit.kind == "double-exp-law");
    CHECK(fit.u == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fit.C == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(fit.residual_mean) < 1e-10);
}

TEST_CASE("fit degrades to insufficient instead of crashing") {
    CHECK(fit_scaling_law({}, "exp-law").kind == "insufficient");
    CHECK(fit_scaling_law({agg_at(0.1, 100.0)}, "exp-law").kind == "insufficient");

    std::vector<RAggregate> censored = {agg_at(0.2, 50.0, true), agg_at(0.1, 50.0, true)};
    auto fit = fit_scaling_law(censored, "double-exp-law");
    CHECK(fit.kind == "insufficient");
    CHECK(fit.censored_count == 2);

    // Two points at the same radius cannot pin a slope.
    std::vector<RAggregate> flat = {agg_at(0.1, 100.0), agg_at(0.1, 120.0)};
    CHECK(fit_scaling_law(flat, "exp-law").kind == "insufficient");

    // T <= 1 has no log log T; those points are unusable.
    std::vector<RAggregate> tiny = {agg_at(0.2, 0.5), agg_at(0.1, 0.9)};
    CHECK(fit_scaling_law(tiny, "exp-law").kind == "insufficient");

    CHECK_THROWS_AS(fit_scaling_law({}, "cubic-law"), ConfigError);
}

TEST_CASE("two usable points fit but are flagged extrapolative") {
    std::vector<RAggregate> aggs = {agg_at(0.4, std::exp(std::exp(1.0))),
                                    agg_at(0.1, std::exp(std::exp(2.0)))};
    auto fit = fit_scaling_law(aggs, "exp-law");
    CHECK(fit.kind == "exp-law");
    CHECK(fit.extrapolative);
    CHECK(fit.points_used == 2);
}

TEST_CASE("censored medians below the curve are consistent, above are not") {
    // Flat law: log log T = 1 at every radius.
    double flat = std::exp(std::exp(1.0));
    std::vector<RAggregate> ok = {agg_at(0.4, flat), agg_at(0.2, flat),
                                  agg_at(0.1, std::exp(std::exp(0.5)), true)};
    auto good = fit_scaling_law(ok, "exp-law");
    CHECK(good.censored_consistent);
    CHECK(good.censored_count == 1);

    std::vector<RAggregate> bad = {agg_at(0.4, flat), agg_at(0.2, flat),
                                   agg_at(0.1, std::exp(std::exp(3.0)), true)};
    auto poor = fit_scaling_law(bad, "exp-law");
    CHECK(!poor.censored_consistent);
}

TEST_CASE("least-squares residuals have zero mean on noisy data") {
    SplitMix64 rng(321);
    std::vector<RAggregate> aggs;
    for (double r : {0.8, 0.4, 0.2, 0.1, 0.05, 0.025}) {
        double y = 0.5 * std::log(1.0 / r) + rng.uniform(-1.0, 1.0);
        aggs.push_back(agg_at(r, std::exp(std::exp(y))));
    }
    auto fit = fit_scaling_law(aggs, "exp-law");
    REQUIRE(fit.kind == "exp-law");
    CHECK(std::abs(fit.residual_mean) < 1e-10);
}

TEST_CASE("plot CSV: rows, columns, and exact round trip") {
    SweepResult s;
    for (double r : {0.4, 0.2, 0.1, 0.05})
        s.aggregates.push_back(agg_at(r, std::exp(std::exp(std::pow(r, -0.5)))));
    s.exp_fit = fit_scaling_law(s.aggregates, "exp-law");
    s.double_exp_fit = fit_scaling_law(s.aggregates, "double-exp-law");

    auto lines = split_lines(sweep_plot_csv(s));
    REQUIRE(lines.size() == 1 + 4 + 50);
    CHECK(lines[0] == "r,log_inv_r,median_log_time,censored,fit_log_time");

    for (int i = 0; i < 4; ++i) {
        auto cells = split_cells(lines[1 + i]);
        REQUIRE(cells.size() == 5);
        CHECK(std::strtod(cells[0].c_str(), nullptr) == s.aggregates[i].r);
        CHECK(std::strtod(cells[2].c_str(), nullptr) ==
              std::log(s.aggregates[i].median_time));
        CHECK(cells[3] == "0");
        CHECK(!cells[4].empty());
    }
    for (std::size_t i = 5; i < lines.size(); ++i) {
        auto cells = split_cells(lines[i]);
        REQUIRE(cells.size() == 5);
        CHECK(cells[2].empty());
        CHECK(cells[3].empty());
    }
    // Curve endpoints span the data radii.
    auto first = split_cells(lines[5]), last = split_cells(lines.back());
    CHECK(std::strtod(first[0].c_str(), nullptr) == doctest::Approx(0.4));
    CHECK(std::strtod(last[0].c_str(), nullptr) == doctest::Approx(0.05));
}

TEST_CASE("plot CSV of an empty sweep is header-only") {
    SweepResult s;
    s.exp_fit = fit_scaling_law({}, "exp-law");
    s.double_exp_fit = fit_scaling_law({}, "double-exp-law");
    CHECK(sweep_plot_csv(s) == "r,log_inv_r,median_log_time,censored,fit_log_time\n");
}

TEST_CASE("config parser: sections, types, comments") {
    auto cfg = ConfigFile::parse_string(
        "# comment\n"
        "top = 3\n"
        "[sweep]\n"
        "r_grid = [0.4, 0.2, 0.1]  # trailing comment\n"
        "ensemble = 16\n"
        "label = \"run # one\"\n"
        "fast = true\n"
        "[experiment]\n"
        "seed = 42\n",
        "test.toml");

    CHECK(cfg.get_number("", "top", 0.0) == 3.0);
    CHECK(cfg.get_number_array("sweep", "r_grid", {}) ==
          std::vector<double>{0.4, 0.2, 0.1});
    CHECK(cfg.get_number("sweep", "ensemble", 0.0) == 16.0);
    CHECK(cfg.get_string("sweep", "label", "") == "run # one");
    CHECK(cfg.get_bool("sweep", "fast", false));
    CHECK(cfg.get_number("experiment", "seed", 0.0) == 42.0);
    CHECK(cfg.get_number("experiment", "missing", -1.0) == -1.0);
    CHECK(cfg.unread_keys().empty());
}

TEST_CASE("config parser rejects malformed input") {
    CHECK_THROWS_AS(ConfigFile::parse_string("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("x = [1, \"two\"]\n"), ConfigError);
    CHECK_THROWS_AS(ConfigFile::parse_string("[bad section\nx = 1\n"), ConfigError);
    auto cfg = ConfigFile::parse_string("x = 5\n");
    CHECK_THROWS_AS(cfg.get_string("", "x", ""), ConfigError);
}

TEST_CASE("config parser tracks unread keys") {
    auto cfg = ConfigFile::parse_string("[sweep]\nensemble = 4\ntypo_key = 1\n");
    CHECK(cfg.get_number("sweep", "ensemble", 0.0) == 4.0);
    auto unread = cfg.unread_keys();
    REQUIRE(unread.size() == 1);
    CHECK(unread[0] == "sweep.typo_key");
}

TEST_CASE("presets load from the repository data files") {
    auto preset = load_preset("golden_convex", TORUSLAB_PRESET_DIR);
    CHECK(preset.name == "golden_convex");
    CHECK(preset.n == 2);
    CHECK(preset.omega[0] == 1.0);
    CHECK(preset.omega[1] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
    CHECK(preset.alpha == 1.0);
    CHECK(preset.tau == 1.0);
    CHECK(preset.sweep.r_grid == std::vector<double>{0.2, 0.1, 0.05});
    CHECK(preset.hamiltonian.dimension() == 2);

    auto names = list_presets(TORUSLAB_PRESET_DIR);
    CHECK(std::find(names.begin(), names.end(), "golden_convex") != names.end());
    CHECK(std::find(names.begin(), names.end(), "strong") != names.end());

    CHECK_THROWS_AS(load_preset("no_such_preset", TORUSLAB_PRESET_DIR), ConfigError);
}

TEST_CASE("experiment config resolution and overrides") {
    Preset preset = load_preset("golden_convex", TORUSLAB_PRESET_DIR);

    auto cfg = ConfigFile::parse_string(
        "[sweep]\n"
        "r_grid = [0.3, 0.15]\n"
        "ensemble = 2\n"
        "budget_steps = 500\n"
        "dt = 0.05\n"
        "[experiment]\n"
        "seed = 99\n"
        "out_dir = \"custom_out\"\n");
    auto resolved = resolve_experiment_config(preset, &cfg, 0, "", 0);
    CHECK(resolved.sweep.r_grid == std::vector<double>{0.3, 0.15});
    CHECK(resolved.sweep.ensemble == 2);
    CHECK(resolved.sweep.budget_steps == 500);
    CHECK(resolved.sweep.dt == 0.05);
    CHECK(resolved.master_seed == 99);
    CHECK(resolved.out_dir == "custom_out");

    // Flags outrank the config file.
    auto flagged = resolve_experiment_config(preset, &cfg, 1234, "flag_out", 3);
    CHECK(flagged.master_seed == 1234);
    CHECK(flagged.out_dir == "flag_out");
    CHECK(flagged.sweep.threads == 3);

    auto unknown = ConfigFile::parse_string("[sweep]\nr_gird = [0.1]\n");
    CHECK_THROWS_AS(resolve_experiment_config(preset, &unknown, 0, "", 0), ConfigError);

    auto increasing = ConfigFile::parse_string("[sweep]\nr_grid = [0.1, 0.2]\n");
    CHECK_THROWS_AS(resolve_experiment_config(preset, &increasing, 0, "", 0),
                    ConfigError);
    auto zero_ens = ConfigFile::parse_string("[sweep]\nensemble = 0\n");
    CHECK_THROWS_AS(resolve_experiment_config(preset, &zero_ens, 0, "", 0), ConfigError);
}

TEST_CASE("series JSON round trip is bit exact") {
    FourierTaylorSeries f(2, 3, 2);
    f.add_action({1, 0}, 1.0 / 3.0);
    f.add_action({2, 0}, 0.1234567890123456789);
    f.add_cos({1, 1}, {0, 0}, 1e-2);
    f.add_sin({2, -1}, {1, 0}, -0.7);
    f.add_exponential_pair({1, 0}, {0, 2}, {0.25, -0.125});

    auto j = series_to_json(f);
    auto g = series_from_json(j);
    CHECK(g.dimension() == 2);
    CHECK(g.k_max() == f.k_max());
    CHECK(g.m_max() == f.m_max());
    CHECK(g.term_count() == f.term_count());
    for (const auto& [idx, c] : f.table()) {
        auto gc = g.coefficient(idx.k, idx.l);
        CHECK(gc.real() == c.real());
        CHECK(gc.imag() == c.imag());
    }
    // Serialized text is canonical: dumping twice gives the same bytes.
    CHECK(j.dump() == series_to_json(g).dump());
}

TEST_CASE("series JSON validation") {
    CHECK_THROWS_AS(series_from_json(nlohmann::json{{"terms", nlohmann::json::array()}}),
                    ConfigError);
    nlohmann::json bad_k = {
        {"n", 2},
        {"terms", {{{"k", {-1, 0}}, {"l", {0, 0}}, {"re", 1.0}, {"im", 0.0}}}}};
    CHECK_THROWS_AS(series_from_json(bad_k), ConfigError);
    nlohmann::json bad_len = {
        {"n", 2}, {"terms", {{{"k", {1}}, {"l", {0, 0}}, {"re", 1.0}, {"im", 0.0}}}}};
    CHECK_THROWS_AS(series_from_json(bad_len), ConfigError);
    nlohmann::json bad_l = {
        {"n", 2},
        {"terms", {{{"k", {1, 0}}, {"l", {-1, 0}}, {"re", 1.0}, {"im", 0.0}}}}};
    CHECK_THROWS_AS(series_from_json(bad_l), ConfigError);
}

TEST_CASE("polynomial and escape record round trips") {
    ActionPolynomial p(2, 4);
    p.set_coefficient({2, 0}, 0.5);
    p.set_coefficient({1, 3}, -1.0 / 7.0);
    auto q = polynomial_from_json(polynomial_to_json(p));
    CHECK(q.dimension() == 2);
    CHECK(q.max_degree() == 4);
    CHECK(q.coefficient({2, 0}) == 0.5);
    CHECK(q.coefficient({1, 3}) == -1.0 / 7.0);

    EscapeTimeRecord rec;
    rec.r = 0.1;
    rec.I_star = {0.0, 0.5};
    rec.initial = {{0.1, 2.2}, {0.05, 0.45}};
    rec.escape_time = 123.456789012345678;
    rec.censored = true;
    rec.exit_norm = 0.199999;
    rec.energy_drift = 1e-13;
    rec.steps = 999999999LL;
    rec.dt = 0.01;
    rec.seed = 0xDEADBEEFCAFEBABEull;
    rec.ok = false;
    rec.error = "non-finite state";
    auto back = escape_record_from_json(escape_record_to_json(rec));
    CHECK(back.r == rec.r);
    CHECK(back.I_star == rec.I_star);
    CHECK(back.initial.theta == rec.initial.theta);
    CHECK(back.initial.I == rec.initial.I);
    CHECK(back.escape_time == rec.escape_time);
    CHECK(back.censored == rec.censored);
    CHECK(back.exit_norm == rec.exit_norm);
    CHECK(back.energy_drift == rec.energy_drift);
    CHECK(back.steps == rec.steps);
    CHECK(back.dt == rec.dt);
    CHECK(back.seed == rec.seed);
    CHECK(back.ok == rec.ok);
    CHECK(back.error == rec.error);

    CHECK_THROWS_AS(escape_record_from_json(nlohmann::json{{"r", "oops"}}), ConfigError);
}

TEST_CASE("JSON files and JSONL files round trip") {
    auto dir = fresh_dir("toruslab_test_io");
    nlohmann::json j = {{"a", 1.5}, {"b", {1, 2, 3}}, {"c", "text"}};
    auto path = (dir / "sub" / "file.json").string();
    write_json_file(path, j);
    CHECK(read_json_file(path) == j);

    std::vector<nlohmann::json> rows = {{{"x", 1}}, {{"x", 2}}, {{"x", 3}}};
    auto lpath = (dir / "rows.jsonl").string();
    write_jsonl_file(lpath, rows);
    auto back = read_jsonl_file(lpath);
    REQUIRE(back.size() == 3);
    CHECK(back[1]["x"] == 2);
    fs::remove_all(dir);
}

TEST_CASE("parallel_for fills every slot and propagates failures") {
    std::vector<int> out(100, -1);
    parallel_for(100, 8, [&](int i) { out[static_cast<std::size_t>(i)] = i * i; });
    for (int i = 0; i < 100; ++i) CHECK(out[static_cast<std::size_t>(i)] == i * i);

    CHECK_THROWS_AS(parallel_for(10, 4,
                                 [&](int i) {
                                     if (i == 7) throw NumericalError("boom");
                                 }),
                    NumericalError);
}

TEST_CASE("escape sweep: structure, seeds, medians, determinism") {
    auto dir = fresh_dir("toruslab_test_sweep");
    auto cfg = quick_config("golden_convex", 777, dir.string());
    cfg.sweep.r_grid = {0.2, 0.1};
    cfg.sweep.ensemble = 4;
    cfg.sweep.budget_steps = 2000;
    cfg.sweep.dt = 0.05;
    cfg.sweep.threads = 1;

    auto sweep = run_escape_sweep(cfg);
    REQUIRE(sweep.records.size() == 8);
    REQUIRE(sweep.aggregates.size() == 2);
    CHECK(sweep.master_seed == 777);

    for (int ri = 0; ri < 2; ++ri) {
        for (int mem = 0; mem < 4; ++mem) {
            const auto& rec = sweep.records[static_cast<std::size_t>(ri * 4 + mem)];
            CHECK(rec.r == cfg.sweep.r_grid[static_cast<std::size_t>(ri)]);
            CHECK(rec.seed ==
                  derive_seed(777, static_cast<std::uint64_t>(ri) * 1'000'000 +
                                       static_cast<std::uint64_t>(mem)));
        }
    }

    // Re-derive the censored-aware median for the first radius.
    std::vector<std::tuple<double, int, bool>> times;
    for (int mem = 0; mem < 4; ++mem) {
        const auto& rec = sweep.records[static_cast<std::size_t>(mem)];
        times.emplace_back(rec.escape_time, mem, rec.censored);
    }
    std::sort(times.begin(), times.end());
    double med = 0.5 * (std::get<0>(times[1]) + std::get<0>(times[2]));
    CHECK(sweep.aggregates[0].median_time == med);
    CHECK(sweep.aggregates[0].median_censored ==
          (std::get<2>(times[1]) || std::get<2>(times[2])));

    auto again = run_escape_sweep(cfg);
    REQUIRE(again.records.size() == sweep.records.size());
    for (std::size_t i = 0; i < sweep.records.size(); ++i)
        CHECK(escape_record_to_json(again.records[i]).dump() ==
              escape_record_to_json(sweep.records[i]).dump());

    // Thread count must not change the values (slot-indexed writes).
    auto parallel = cfg;
    parallel.sweep.threads = 4;
    auto par = run_escape_sweep(parallel);
    REQUIRE(par.records.size() == sweep.records.size());
    for (std::size_t i = 0; i < sweep.records.size(); ++i)
        CHECK(escape_record_to_json(par.records[i]).dump() ==
              escape_record_to_json(sweep.records[i]).dump());
    fs::remove_all(dir);
}

TEST_CASE("integrable preset: all censored, fit insufficient") {
    auto dir = fresh_dir("toruslab_test_integrable");
    auto cfg = quick_config("integrable", 5, dir.string());
    cfg.sweep.budget_steps = 1000;
    cfg.sweep.ensemble = 3;

    auto sweep = run_escape_sweep(cfg);
    for (const auto& rec : sweep.records) {
        CHECK(rec.censored);
        CHECK(rec.ok);
    }
    CHECK(sweep.exp_fit.kind == "insufficient");
    CHECK(sweep.double_exp_fit.kind == "insufficient");
    fs::remove_all(dir);
}

TEST_CASE("pipeline on the golden preset completes with u = 1/2") {
    auto dir = fresh_dir("toruslab_test_pipe_golden");
    auto cfg = quick_config("golden_convex", 2024, dir.string());
    auto rep = run_pipeline(cfg, m0(cfg.preset.n), dir.string());

    REQUIRE(rep.stages.size() == 6);
    const char* names[] = {"diophantine", "normal-form", "steepness",
                           "exponents",   "escape-sweep", "comparison"};
    for (int i = 0; i < 6; ++i) {
        CHECK(rep.stages[static_cast<std::size_t>(i)].name == names[i]);
        const auto& s = rep.stages[static_cast<std::size_t>(i)].status;
        CHECK((s == "ok" || s == "failed" || s == "skipped"));
    }
    CHECK(rep.all_ok);

    auto dio = find_stage(rep, "diophantine");
    CHECK(dio->status == "ok");
    CHECK(dio->payload["gamma_est"] == 1.0);

    auto steep = find_stage(rep, "steepness");
    CHECK(steep->status == "ok");
    CHECK(steep->payload["accepted"] == true);

    auto expo = find_stage(rep, "exponents");
    CHECK(expo->status == "ok");
    CHECK(expo->payload["predicted_u"] == 0.5);

    CHECK(fs::exists(dir / "pipeline_report.json"));
    CHECK(fs::exists(dir / "dio_report.json"));
    CHECK(fs::exists(dir / "normal_form.json"));
    CHECK(fs::exists(dir / "steep_verdict.json"));
    CHECK(fs::exists(dir / "exponents.json"));
    CHECK(fs::exists(dir / "escape_records.jsonl"));
    CHECK(fs::exists(dir / "sweep_summary.json"));
    CHECK(fs::exists(dir / "sweep_plot.csv"));

    auto report_json = read_json_file((dir / "pipeline_report.json").string());
    CHECK(report_json["all_ok"] == true);
    fs::remove_all(dir);
}

TEST_CASE("pipeline on the resonant preset stops at the small divisor") {
    auto dir = fresh_dir("toruslab_test_pipe_resonant");
    auto cfg = quick_config("resonant", 2024, dir.string());
    auto rep = run_pipeline(cfg, m0(cfg.preset.n), dir.string());

    CHECK(!rep.all_ok);
    auto dio = find_stage(rep, "diophantine");
    CHECK(dio->status == "ok");
    CHECK(dio->detail.find("resonance") != std::string::npos);

    auto nf = find_stage(rep, "normal-form");
    REQUIRE(nf != nullptr);
    CHECK(nf->status == "failed");
    CHECK(nf->detail.find("(1,-1)") != std::string::npos);

    auto steep = find_stage(rep, "steepness");
    CHECK(steep->status == "skipped");
    fs::remove_all(dir);
}

TEST_CASE("pipeline on the saddle preset rejects steepness with a line witness") {
    auto dir = fresh_dir("toruslab_test_pipe_saddle");
    auto cfg = quick_config("saddle", 2024, dir.string());
    auto rep = run_pipeline(cfg, m0(cfg.preset.n), dir.string());

    CHECK(!rep.all_ok);
    auto steep = find_stage(rep, "steepness");
    REQUIRE(steep != nullptr);
    CHECK(steep->status == "failed");
    CHECK(steep->payload["accepted"] == false);
    REQUIRE(steep->payload.contains("witness"));
    CHECK(steep->payload["witness"]["Lambda"].size() == 1);
    fs::remove_all(dir);
}
