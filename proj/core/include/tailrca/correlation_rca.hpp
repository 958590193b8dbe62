// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tailrca/spike_detection.hpp"
#include "tailrca/telemetry_model.hpp"

namespace tailrca {

struct RcaParams {
    int max_lag = 20;              // K, samples (200 ms at 100 Hz)
    double alpha = 0.5;            // confidence mix weight
    double spike_cap = 10.0;       // S_cap for normalize_spike
    double low_confidence = 0.2;   // warn when top confidence falls below
    double analysis_budget_s = 1.0;  // fixed simulated-clock analysis time
    double threshold_sigma = 3.0;  // onset threshold inside diagnose
};

/// Lagged cross-correlation of a target/metric pair.
///
/// Lag convention: rho(k) for k >= 0 pairs target[t] with metric[t+k]
/// (numerator over the N-k overlapping pairs, means and denominator norms
/// over all N samples). For k < 0 the two series swap roles, so a NEGATIVE
/// best_lag means the metric leads the target by |k| samples - the causal
/// direction for interference. Ties break toward the smallest |k|, negative
/// before positive.
struct CorrelationResult {
    MetricId metric = MetricId::NcclLatency;
    int max_lag = 0;
    int best_lag = 0;
    double best_corr = 0.0;           // max_k |rho(k)|, in [0, 1]
    std::vector<double> rho_curve;    // 2K+1 values, index i holds lag i-K

    double rho(int k) const { return rho_curve[static_cast<std::size_t>(k + max_lag)]; }
};

/// Computes the full [-K, K] correlation curve. Requires both sequences the
/// same length N >= 2K+2. Throws DegenerateSeries when either sequence is
/// constant after mean subtraction (norm below 1e-12).
CorrelationResult lagged_xcorr(std::span<const double> target,
                               std::span<const double> metric, int max_lag,
                               MetricId metric_id = MetricId::NcclLatency);

/// Maps an unbounded sigma-unit spike score into [0, 1]:
/// min(max(score, 0), cap) / cap.
double normalize_spike(double score_sigma, double cap = 10.0);

/// Per-metric evidence entering the ranking.
struct Evidence {
    MetricId metric = MetricId::NcclLatency;
    double spike_score_norm = 0.0;  // in [0, 1]
    double correlation = 0.0;       // c_i in [0, 1]; 0 when degenerate
    double confidence = 0.0;        // alpha * spike + (1 - alpha) * corr
    int best_lag_samples = 0;
    double best_lag_ms = 0.0;
    bool degenerate = false;
};

struct CategoryScore {
    CauseCategory category = CauseCategory::IO;
    double confidence = 0.0;
};

/// Ranked diagnosis for one confirmed target spike.
struct Diagnosis {
    SpikeReport spike;
    std::vector<Evidence> evidence;       // metric declaration order
    std::vector<CategoryScore> ranking;   // all four categories, descending
    CauseCategory top_cause = CauseCategory::IO;
    bool low_confidence = false;
    std::int64_t onset_ts = 0;
    std::int64_t detected_ts = 0;
    std::int64_t rca_ts = 0;
    double time_to_rca_s = 0.0;           // rca_ts - onset_ts
};

/// Ranks cause categories for a confirmed spike.
///
/// Per host metric in the frame: spike score over the frame window against
/// its baseline, normalized and mixed with the peak absolute lagged
/// correlation. Category confidence is the max over member metrics; ties
/// break in declaration order (IO, CPU, NIC, GPU). Metrics with degenerate
/// correlation fall back to the spike term alone. onset_ts/detected_ts
/// default to the spike report's own onset and window end.
Diagnosis diagnose(const AlignedFrame& frame, const SpikeReport& spike,
                   const std::map<MetricId, BaselineStats>& baselines,
                   const RcaParams& params,
                   std::optional<std::int64_t> onset_ts = std::nullopt,
                   std::optional<std::int64_t> detected_ts = std::nullopt);

}  // namespace tailrca
