#include "toruslab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <thread>

#include "toruslab/birkhoff.hpp"
#include "toruslab/diophantine.hpp"
#include "toruslab/errors.hpp"
#include "toruslab/rng.hpp"
#include "toruslab/serialization.hpp"
#include "toruslab/steepness.hpp"

namespace toruslab {

namespace {

constexpr double kEulerE = 2.718281828459045;

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_index(const MultiIndex& k) {
    std::string s = "(";
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(k[i]);
    }
    return s + ")";
}

// y-space transforms for the two laws: y(T) and the fitted log T back out.
double fit_ordinate(const std::string& kind, double T) {
    if (kind == "exp-law") return std::log(std::log(T));
    return std::log(std::log(std::log(T)));
}

bool fit_ordinate_defined(const std::string& kind, double T) {
    return kind == "exp-law" ? T > 1.0 : T > kEulerE;
}

}  // namespace

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

SweepResult run_escape_sweep(const ExperimentConfig& cfg) {
    const auto& sweep = cfg.sweep;
    CompiledHamiltonian H(cfg.preset.hamiltonian);
    if (static_cast<int>(cfg.preset.i_star.size()) != H.dimension())
        throw ConfigError("i_star length does not match the series dimension");
    double dt = default_time_step(H, sweep.dt);

    SweepResult out;
    out.master_seed = cfg.master_seed;
    out.preset_name = cfg.preset.name;

    int R = static_cast<int>(sweep.r_grid.size());
    int E = sweep.ensemble;
    out.records.resize(static_cast<std::size_t>(R) * E);
    parallel_for(R * E, sweep.threads, [&](int idx) {
        int r_index = idx / E;
        int member = idx % E;
        std::uint64_t seed = derive_seed(
            cfg.master_seed,
            static_cast<std::uint64_t>(r_index) * 1'000'000ull +
                static_cast<std::uint64_t>(member));
        out.records[static_cast<std::size_t>(idx)] =
            escape_time(H, cfg.preset.i_star, sweep.r_grid[static_cast<std::size_t>(r_index)],
                        dt, sweep.budget_steps, seed);
    });

    for (int r_index = 0; r_index < R; ++r_index) {
        RAggregate agg;
        agg.r = sweep.r_grid[static_cast<std::size_t>(r_index)];
        agg.ensemble = E;
        // (time, censored) sorted by time with the member index as the tie
        // break, so the median is reproducible.
        std::vector<std::tuple<double, int, bool>> times;
        times.reserve(static_cast<std::size_t>(E));
        for (int member = 0; member < E; ++member) {
            const auto& rec = out.records[static_cast<std::size_t>(r_index) * E + member];
            if (rec.censored) ++agg.censored;
            times.emplace_back(rec.escape_time, member, rec.censored);
        }
        std::sort(times.begin(), times.end());
        agg.min_time = std::get<0>(times.front());
        agg.max_time = std::get<0>(times.back());
        if (E % 2 == 1) {
            agg.median_time = std::get<0>(times[static_cast<std::size_t>(E / 2)]);
            agg.median_censored = std::get<2>(times[static_cast<std::size_t>(E / 2)]);
        } else {
            const auto& lo = times[static_cast<std::size_t>(E / 2 - 1)];
            const auto& hi = times[static_cast<std::size_t>(E / 2)];
            agg.median_time = 0.5 * (std::get<0>(lo) + std::get<0>(hi));
            agg.median_censored = std::get<2>(lo) || std::get<2>(hi);
        }
        out.aggregates.push_back(std::move(agg));
    }

    out.exp_fit = fit_scaling_law(out.aggregates, "exp-law");
    out.double_exp_fit = fit_scaling_law(out.aggregates, "double-exp-law");
    return out;
}

ScalingFit fit_scaling_law(const std::vector<RAggregate>& aggregates,
                           const std::string& kind) {
    if (kind != "exp-law" && kind != "double-exp-law")
        throw ConfigError("unknown scaling law: " + kind);

    ScalingFit fit;
    fit.kind = kind;
    for (const auto& agg : aggregates) {
        FitPoint p;
        p.r = agg.r;
        p.median_time = agg.median_time;
        p.censored = agg.median_censored;
        p.used = !agg.median_censored && agg.r > 0.0 &&
                 fit_ordinate_defined(kind, agg.median_time);
        if (p.censored) ++fit.censored_count;
        fit.points.push_back(p);
    }

    int used = 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& p : fit.points) {
        if (!p.used) continue;
        double x = std::log(1.0 / p.r);
        double y = fit_ordinate(kind, p.median_time);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    fit.points_used = used;
    if (used < 2) {
        fit.kind = "insufficient";
        return fit;
    }
    double denom = used * sxx - sx * sx;
    if (denom == 0.0) {
        fit.kind = "insufficient";
        return fit;
    }
    double slope = (used * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / used;
    fit.u = slope;
    fit.C = std::exp(intercept);
    fit.extrapolative = used < 3;

    double res = 0.0;
    for (const auto& p : fit.points) {
        if (!p.used) continue;
        double x = std::log(1.0 / p.r);
        res += fit_ordinate(kind, p.median_time) - (intercept + slope * x);
    }
    fit.residual_mean = res / used;

    // Censored medians are lower bounds on the truth; the fitted curve
    // must not pass below them where a comparison is defined.
    for (const auto& p : fit.points) {
        if (!p.censored) continue;
        if (!fit_ordinate_defined(kind, p.median_time)) continue;
        double yhat = intercept + slope * std::log(1.0 / p.r);
        if (yhat < fit_ordinate(kind, p.median_time)) fit.censored_consistent = false;
    }
    return fit;
}

nlohmann::json fit_to_json(const ScalingFit& f) {
    nlohmann::json j;
    j["fit_kind"] = f.kind;
    j["fitted_u"] = f.u;
    j["fitted_C"] = f.C;
    j["points_used"] = f.points_used;
    j["censored_count"] = f.censored_count;
    j["extrapolative"] = f.extrapolative;
    j["censored_consistent"] = f.censored_consistent;
    j["residual_mean"] = f.residual_mean;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : f.points) {
        nlohmann::json pj;
        pj["r"] = p.r;
        pj["median_time"] = p.median_time;
        pj["censored"] = p.censored;
        pj["used"] = p.used;
        pts.push_back(std::move(pj));
    }
    j["points"] = std::move(pts);
    return j;
}

nlohmann::json sweep_summary_to_json(const SweepResult& s) {
    nlohmann::json j;
    j["preset"] = s.preset_name;
    j["master_seed"] = s.master_seed;
    j["dt"] = s.records.empty() ? 0.0 : s.records.front().dt;
    j["record_count"] = s.records.size();
    nlohmann::json aggs = nlohmann::json::array();
    for (const auto& a : s.aggregates) {
        nlohmann::json aj;
        aj["r"] = a.r;
        aj["ensemble"] = a.ensemble;
        aj["censored"] = a.censored;
        aj["median_time"] = a.median_time;
        aj["median_censored"] = a.median_censored;
        aj["min_time"] = a.min_time;
        aj["max_time"] = a.max_time;
        aggs.push_back(std::move(aj));
    }
    j["aggregates"] = std::move(aggs);
    j["exp_fit"] = fit_to_json(s.exp_fit);
    j["double_exp_fit"] = fit_to_json(s.double_exp_fit);
    return j;
}

std::string sweep_plot_csv(const SweepResult& s) {
    // Data rows carry the medians; the fitted curve of the headline law
    // (double-exp when available, else exp) is sampled on 50 radii. Cells
    // that do not apply are left empty.
    std::string csv = "r,log_inv_r,median_log_time,censored,fit_log_time\n";
    const ScalingFit* fit = nullptr;
    if (s.double_exp_fit.kind == "double-exp-law")
        fit = &s.double_exp_fit;
    else if (s.exp_fit.kind == "exp-law")
        fit = &s.exp_fit;

    auto fitted_log_T = [&](double r) -> std::string {
        double y = std::log(fit->C) + fit->u * std::log(1.0 / r);
        if (fit->kind == "exp-law") {
            if (y > 700.0) return "";
            return format_g17(std::exp(y));
        }
        if (y > 6.5) return "";  // exp(exp(6.5)) overflows
        return format_g17(std::exp(std::exp(y)));
    };

    for (const auto& a : s.aggregates) {
        csv += format_g17(a.r) + "," + format_g17(std::log(1.0 / a.r)) + "," +
               format_g17(std::log(a.median_time)) + "," +
               (a.median_censored ? "1" : "0") + ",";
        if (fit) csv += fitted_log_T(a.r);
        csv += "\n";
    }

    if (fit) {
        double r_hi = s.aggregates.empty() ? 1.0 : s.aggregates.front().r;
        double r_lo = s.aggregates.empty() ? 0.1 : s.aggregates.back().r;
        for (int i = 0; i < 50; ++i) {
            double t = static_cast<double>(i) / 49.0;
            double r = r_hi * std::pow(r_lo / r_hi, t);
            csv += format_g17(r) + "," + format_g17(std::log(1.0 / r)) + ",,," +
                   fitted_log_T(r) + "\n";
        }
    }
    return csv;
}

PipelineReport run_pipeline(const ExperimentConfig& cfg, int bnf_order,
                            const std::string& out_dir) {
    PipelineReport report;
    report.preset_name = cfg.preset.name;
    const Preset& preset = cfg.preset;
    int n = preset.n;
    double tau_eff = preset.tau < 0.0 ? static_cast<double>(n - 1) : preset.tau;

    auto out_path = [&](const std::string& file) {
        return (std::filesystem::path(out_dir) / file).string();
    };

    // Stage 1: how Diophantine the frequency looks at a finite depth.
    {
        PipelineStage st;
        st.name = "diophantine";
        try {
            auto dio = gamma_estimate(preset.omega, tau_eff, default_scan_depth(n));
            st.payload = diophantine_report_to_json(dio);
            write_json_file(out_path("dio_report.json"), st.payload);
            st.status = "ok";
            if (dio.gamma_est > 0.0)
                st.detail = "gamma_est " + format_g17(dio.gamma_est) + " at K " +
                            std::to_string(dio.K);
            else
                st.detail = "resonance at k = " + format_index(dio.argmin_k);
        } catch (const std::exception& e) {
            st.status = "failed";
            st.detail = e.what();
        }
        report.stages.push_back(std::move(st));
    }

    // Stage 2: finite-order normal form around the torus.
    NormalFormResult nf;
    bool have_nf = false;
    {
        PipelineStage st;
        st.name = "normal-form";
        {
            try {
                nf = bnf(preset.hamiltonian, preset.omega, bnf_order);
                have_nf = true;
                st.status = "ok";
                st.detail = "order " + std::to_string(bnf_order) + ", residual " +
                            format_g17(nf.residual_max);
                st.payload = normal_form_to_json(nf);
                write_json_file(out_path("normal_form.json"), st.payload);
            } catch (const SmallDivisorError& e) {
                st.status = "failed";
                st.detail = std::string("small divisor at k = ") + format_index(e.k) +
                            ": " + e.what();
            } catch (const NumericalError& e) {
                st.status = "failed";
                st.detail = e.what();
            }
        }
        report.stages.push_back(std::move(st));
    }

    // Stage 3: steepness of the normal form truncation.
    bool steep_accepted = false;
    int steep_m = 0;
    {
        PipelineStage st;
        st.name = "steepness";
        if (!have_nf) {
            st.status = "skipped";
            st.detail = "no normal form available";
        } else {
            SamplingConfig scfg{48, 12, 12, 24, 4, derive_seed(cfg.master_seed, 0x5157)};
            std::vector<double> rho_grid{1e-3, 1e-2, 1e-1};
            std::vector<double> c_grid{1e-3, 1e-2, 1e-1, 1.0};
            std::vector<double> delta_grid{1e-2, 1e-1, 1.0};
            SteepnessVerdict best;
            bool found = false;
            std::uint64_t attempt = 0;
            for (double rho : rho_grid) {
                for (double C : c_grid) {
                    for (double delta : delta_grid) {
                        SamplingConfig attempt_cfg = scfg;
                        attempt_cfg.seed = derive_seed(scfg.seed, ++attempt);
                        auto verdict = stably_steep_check(nf.H_m, rho, C, delta, attempt_cfg);
                        best = verdict;
                        if (verdict.accepted) {
                            found = true;
                            break;
                        }
                    }
                    if (found) break;
                }
                if (found) break;
            }
            steep_accepted = found;
            steep_m = nf.H_m.max_degree();
            st.payload = steepness_verdict_to_json(best);
            write_json_file(out_path("steep_verdict.json"), st.payload);
            if (found) {
                st.status = "ok";
                st.detail = "stably steep with rho " + format_g17(best.rho) + ", C " +
                            format_g17(best.C) + ", delta " + format_g17(best.delta);
            } else {
                st.status = "failed";
                st.detail = "no (rho, C, delta) on the grid was accepted";
            }
        }
        report.stages.push_back(std::move(st));
    }

    // Stage 4: predicted exponents from the constants in force.
    double predicted_u = 0.0;
    bool have_exponents = false;
    {
        PipelineStage st;
        st.name = "exponents";
        try {
            predicted_u = double_exp_exponent(preset.alpha, tau_eff);
            double p = steep_accepted ? std::max(1.0, static_cast<double>(steep_m - 1))
                                      : static_cast<double>(m0(n) - 1);
            auto nek = nekhoroshev_exponents(n, p, 1.0);
            nlohmann::json j;
            j["alpha"] = preset.alpha;
            j["tau"] = tau_eff;
            j["predicted_u"] = predicted_u;
            j["kam_exponent_bound"] = kam_exponent_bound(preset.alpha, n);
            j["m0"] = m0(n);
            j["steep_p"] = p;
            j["nekhoroshev"] = {{"n", nek.n},
                                {"p", nek.p},
                                {"beta", nek.beta},
                                {"a", nek.a},
                                {"radius_exponent", nek.radius_exponent},
                                {"time_exponent", nek.time_exponent},
                                {"threshold_exponent", nek.threshold_exponent}};
            st.payload = j;
            write_json_file(out_path("exponents.json"), j);
            st.status = "ok";
            st.detail = "predicted u " + format_g17(predicted_u);
            have_exponents = true;
        } catch (const std::exception& e) {
            st.status = "failed";
            st.detail = e.what();
        }
        report.stages.push_back(std::move(st));
    }

    // Stage 5: escape-time sweep.
    SweepResult sweep;
    bool have_sweep = false;
    {
        PipelineStage st;
        st.name = "escape-sweep";
        try {
            sweep = run_escape_sweep(cfg);
            have_sweep = true;
            std::vector<nlohmann::json> rows;
            rows.reserve(sweep.records.size());
            for (const auto& rec : sweep.records) rows.push_back(escape_record_to_json(rec));
            write_jsonl_file(out_path("escape_records.jsonl"), rows);
            st.payload = sweep_summary_to_json(sweep);
            write_json_file(out_path("sweep_summary.json"), st.payload);
            write_text_file(out_path("sweep_plot.csv"), sweep_plot_csv(sweep));
            int censored = 0;
            for (const auto& a : sweep.aggregates) censored += a.censored;
            st.status = "ok";
            st.detail = std::to_string(sweep.records.size()) + " records, " +
                        std::to_string(censored) + " censored";
        } catch (const std::exception& e) {
            st.status = "failed";
            st.detail = e.what();
        }
        report.stages.push_back(std::move(st));
    }

    // Stage 6: fitted exponent against the prediction.
    {
        PipelineStage st;
        st.name = "comparison";
        if (!have_sweep || !have_exponents) {
            st.status = "skipped";
            st.detail = "missing sweep or exponents";
        } else {
            nlohmann::json j;
            j["predicted_u"] = predicted_u;
            j["fit_kind"] = sweep.double_exp_fit.kind;
            if (sweep.double_exp_fit.kind != "insufficient") {
                j["fitted_u_double_exp"] = sweep.double_exp_fit.u;
                j["ratio"] =
                    predicted_u != 0.0 ? sweep.double_exp_fit.u / predicted_u : 0.0;
                j["extrapolative"] = sweep.double_exp_fit.extrapolative;
            }
            if (sweep.exp_fit.kind != "insufficient")
                j["fitted_u_exp"] = sweep.exp_fit.u;
            st.payload = j;
            st.status = "ok";
            if (sweep.double_exp_fit.kind == "insufficient")
                st.detail = "predicted u " + format_g17(predicted_u) +
                            "; medians too small for a doubly iterated log fit";
            else
                st.detail = "fitted u " + format_g17(sweep.double_exp_fit.u) +
                            " vs predicted " + format_g17(predicted_u);
        }
        report.stages.push_back(std::move(st));
    }

    report.all_ok = true;
    for (const auto& st : report.stages)
        if (st.status != "ok") report.all_ok = false;
    write_json_file(out_path("pipeline_report.json"), pipeline_report_to_json(report));
    return report;
}

nlohmann::json pipeline_report_to_json(const PipelineReport& r) {
    nlohmann::json j;
    j["preset"] = r.preset_name;
    j["all_ok"] = r.all_ok;
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& st : r.stages) {
        nlohmann::json sj;
        sj["name"] = st.name;
        sj["status"] = st.status;
        sj["detail"] = st.detail;
        sj["payload"] = st.payload;
        stages.push_back(std::move(sj));
    }
    j["stages"] = std::move(stages);
    return j;
}

}  // namespace toruslab
