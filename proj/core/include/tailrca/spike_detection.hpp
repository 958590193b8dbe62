// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "tailrca/telemetry_model.hpp"

namespace tailrca {

struct DetectionParams {
    double threshold_sigma = 3.0;      // spike declared when score > threshold
    double observation_window_s = 5.0; // W
    double baseline_window_s = 30.0;   // W_b, immediately preceding W
    double stride_ms = 100.0;          // evaluation cadence
    double sigma_floor = 1e-9;         // native units; guards constant series
    int min_baseline_samples = 100;

    std::int64_t observation_window_ns() const {
        return static_cast<std::int64_t>(observation_window_s * 1e9);
    }
    std::int64_t baseline_window_ns() const {
        return static_cast<std::int64_t>(baseline_window_s * 1e9);
    }
    std::int64_t stride_ns() const {
        return static_cast<std::int64_t>(stride_ms * 1e6);
    }
};

/// Mean and population standard deviation over a baseline window W_b.
/// sigma is floored at sigma_floor so constant series stay divisible.
struct BaselineStats {
    MetricId metric = MetricId::NcclLatency;
    double mu = 0.0;
    double sigma = 0.0;
    TimeInterval window;
    std::size_t sample_count = 0;
};

/// Max-normalized deviation over an observation window W:
///   score = max over W of (value - mu) / sigma.
struct SpikeReport {
    MetricId metric = MetricId::NcclLatency;
    double score = 0.0;
    std::int64_t peak_ts = 0;                // earliest sample attaining score
    std::optional<std::int64_t> onset_ts;    // earliest sample above threshold
    TimeInterval window;
    bool is_spike = false;                   // score > threshold, strict
};

/// Baseline statistics over `window`. Throws InsufficientBaseline when the
/// window holds fewer than min_baseline_samples grid points.
BaselineStats baseline(const MetricSeries& series, TimeInterval window,
                       const DetectionParams& params = {});

/// Spike score over `window` against precomputed stats. Ties on the max break
/// toward the earliest timestamp. Throws WindowOutOfRange.
SpikeReport spike_score(const MetricSeries& series, const BaselineStats& stats,
                        TimeInterval window, double threshold_sigma = 3.0);

/// Earliest timestamp in `window` whose value exceeds mu + threshold * sigma.
/// Throws NoOnset when nothing crosses.
std::int64_t spike_onset(const MetricSeries& series, const BaselineStats& stats,
                         TimeInterval window, double threshold_sigma = 3.0);

/// Single stateless evaluation at `now`: trailing observation window scored
/// against the baseline window immediately preceding it. Returns a report
/// only when it is a spike.
std::optional<SpikeReport> detect(const MetricSeries& target, std::int64_t now,
                                  const DetectionParams& params = {});

/// A spike confirmed by the rolling detector. detected_ts is the evaluation
/// time at which the observation window had fully traversed the onset;
/// detected_ts - onset_ts is the detection latency (~ one window length).
struct ConfirmedSpike {
    SpikeReport report;
    std::int64_t onset_ts = 0;
    std::int64_t detected_ts = 0;
};

/// Rolling spike detector, one instance per target stream (single owner).
///
/// A spike first seen at some evaluation is held pending and confirmed once
/// the observation window lies entirely past the onset estimate, i.e. the
/// window is filled with post-onset data. This reproduces the sliding-window
/// accounting where a 5 s window yields ~5 s detection latency, and gives the
/// correlation stage a full window of disturbed signal to work with. One
/// report per episode; the episode ends when the score drops back below the
/// threshold.
class SpikeDetector {
   public:
    explicit SpikeDetector(DetectionParams params) : params_(params) {}

    /// Evaluate at `now`. Returns a confirmed spike at most once per episode.
    std::optional<ConfirmedSpike> step(const MetricSeries& target,
                                       std::int64_t now);

    void reset();

    const DetectionParams& params() const { return params_; }

   private:
    DetectionParams params_;
    std::optional<std::int64_t> pending_onset_;
    bool in_episode_ = false;
};

}  // namespace tailrca
