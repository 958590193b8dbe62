// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "tailrca/correlation_rca.hpp"
#include "tailrca/spike_detection.hpp"
#include "tailrca/telemetry_model.hpp"

namespace tailrca {

struct EngineParams {
    int grid_hz = 100;
    std::int64_t max_gap_ns = 2'000'000'000LL;
    DetectionParams detection;
    RcaParams rca;
    /// Metrics removed from frames before diagnosis (ablation runs).
    std::set<MetricId> ablated;
};

struct RunResult {
    std::vector<Diagnosis> diagnoses;
    int evaluations = 0;  // detector ticks executed
};

/// Detection plus diagnosis over a full telemetry capture.
///
/// All ingestion paths funnel through run(SampleStreams): raw samples are
/// hold-aligned onto the common grid, the rolling detector scans the target
/// at the configured stride, and each confirmed spike is diagnosed against
/// per-metric baselines from the window immediately preceding the
/// observation window. Results are bit-deterministic for identical input.
class DiagnosisEngine {
   public:
    explicit DiagnosisEngine(EngineParams params) : params_(params) {}

    /// Runs the pipeline over raw sample streams. Throws EmptyStream when the
    /// target stream is missing and InsufficientBaseline when the capture is
    /// shorter than baseline + observation window.
    RunResult run(const SampleStreams& streams) const;

    /// Convenience: gridded series in, same pipeline.
    RunResult run(const std::map<MetricId, MetricSeries>& series) const;

    const EngineParams& params() const { return params_; }

   private:
    EngineParams params_;
};

}  // namespace tailrca
