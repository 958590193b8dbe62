// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tailrca/simulator.hpp"

namespace tailrca {

/// Per-trial disturbance randomization ranges. These are the frozen default
/// calibration; together with the coupling defaults they set where the
/// accuracy numbers land.
struct TrialRandomization {
    double min_magnitude_sigma = 2.8;
    double max_magnitude_sigma = 7.0;
    double min_onset_s = 37.0;
    double max_onset_s = 42.0;
    double duration_s = 10.0;
    double ramp_ms = 200.0;
    double max_lag_ms = 200.0;  // drawn uniformly on the 10 ms grid
    double modulation_depth = 0.25;
};

struct EvaluationConfig {
    int trials_per_category = 17;
    std::uint64_t seed_base = 1;
    EngineParams engine;
    WorkloadModel workload;  // template; seed is overridden per trial
    TrialRandomization randomization;
    int workers = 0;         // 0 = hardware concurrency
};

/// Trial seeds derive as seed_base + category_index * 10000 + trial_index so
/// any single trial is re-runnable in isolation.
std::uint64_t trial_seed(std::uint64_t seed_base, int category_index,
                         int trial_index);

/// The fully specified scenario for one (category, trial) cell.
Scenario make_trial_scenario(CauseCategory category, int trial_index,
                             const EvaluationConfig& config);

struct CategoryStats {
    CauseCategory category = CauseCategory::IO;
    int trials = 0;
    int classified = 0;  // detected and diagnosed
    int missed = 0;
    int correct = 0;
    double accuracy_pct = 0.0;           // correct / classified
    double median_time_to_rca_s = 0.0;   // over classified trials
    std::array<int, kCategoryCount> predicted_counts{};
};

struct EvaluationReport {
    std::array<CategoryStats, kCategoryCount> per_category;
    double mean_accuracy_pct = 0.0;  // arithmetic mean of the four accuracies
    /// Row-normalized percentages over classified trials; rows injected,
    /// columns predicted, declaration order.
    std::array<std::array<double, kCategoryCount>, kCategoryCount> confusion_pct{};
    int total_trials = 0;
    int total_missed = 0;
    std::string config_fingerprint;
};

struct EvaluationResult {
    EvaluationReport report;
    std::vector<TrialResult> trials;  // category-major, trial order
};

/// Canonical parameter hash (seeds, engine, workload, randomization,
/// ablation). Worker count is excluded: it never changes output bytes.
std::string config_fingerprint(const EvaluationConfig& config);

/// Runs trials_per_category labeled scenarios per category, in parallel up to
/// the worker count, and aggregates deterministically (ordered reduction).
EvaluationResult run_evaluation(const EvaluationConfig& config);

/// Fixed-layout human-readable report.
std::string render_report_table(const EvaluationReport& report);

/// One machine-readable record line (schema tailrca.evaluation.v1).
std::string render_report_record(const EvaluationReport& report);

}  // namespace tailrca
