#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "toruslab/config.hpp"
#include "toruslab/escape.hpp"

namespace toruslab {

struct RAggregate {
    double r = 0.0;
    int ensemble = 0;
    int censored = 0;
    // Median with censored members entered at the budget time; flagged
    // censored when a middle element is censored.
    double median_time = 0.0;
    bool median_censored = false;
    double min_time = 0.0;
    double max_time = 0.0;
};

struct FitPoint {
    double r = 0.0;
    double median_time = 0.0;
    bool censored = false;
    bool used = false;
};

struct ScalingFit {
    // "exp-law": log log T = log C + u log(1/r)
    // "double-exp-law": log log log T = log C + u log(1/r)
    // "insufficient" when fewer than two usable points remain.
    std::string kind;
    double u = 0.0;
    double C = 0.0;
    int points_used = 0;
    int censored_count = 0;
    // Fewer than three uncensored points pins the line through too little
    // data to trust an extrapolation.
    bool extrapolative = false;
    // Censored medians are lower bounds; consistent when the fit does not
    // undershoot them.
    bool censored_consistent = true;
    double residual_mean = 0.0;
    std::vector<FitPoint> points;
};

struct SweepResult {
    std::vector<EscapeTimeRecord> records;
    std::vector<RAggregate> aggregates;
    ScalingFit exp_fit;
    ScalingFit double_exp_fit;
    std::uint64_t master_seed = 0;
    std::string preset_name;
};

SweepResult run_escape_sweep(const ExperimentConfig& cfg);

ScalingFit fit_scaling_law(const std::vector<RAggregate>& aggregates,
                           const std::string& kind);

nlohmann::json sweep_summary_to_json(const SweepResult& s);
nlohmann::json fit_to_json(const ScalingFit& f);

// CSV with one data row per r plus sampled fitted-curve rows for both
// laws.
std::string sweep_plot_csv(const SweepResult& s);

struct PipelineStage {
    std::string name;
    // "ok", "failed", or "skipped".
    std::string status;
    std::string detail;
    nlohmann::json payload;
};

struct PipelineReport {
    std::string preset_name;
    std::vector<PipelineStage> stages;
    bool all_ok = false;
};

PipelineReport run_pipeline(const ExperimentConfig& cfg, int bnf_order,
                            const std::string& out_dir);

nlohmann::json pipeline_report_to_json(const PipelineReport& r);

// Runs fn(i) for i in [0, count) on `threads` workers. Results must be
// written to slot i of preallocated storage; the schedule is not
// deterministic but the output is.
void parallel_for(int count, int threads,
                  const std::function<void(int)>& fn);

}  // namespace toruslab
