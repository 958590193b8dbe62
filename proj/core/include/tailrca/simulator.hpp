// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "tailrca/engine.hpp"
#include "tailrca/telemetry_model.hpp"

namespace tailrca {

enum class DisturbanceKind { D1_IO, D2_CPU, D3_NIC, D4_GPU_THROTTLE };

CauseCategory disturbance_category(DisturbanceKind kind);
DisturbanceKind kind_for_category(CauseCategory category);
std::string_view kind_name(DisturbanceKind kind);
std::optional<DisturbanceKind> kind_from_name(std::string_view name);

/// The single most informative metric for a disturbance kind, used by the
/// probe-ablation experiments.
MetricId primary_metric(DisturbanceKind kind);

/// Stationary baseline of one host metric: mean, noise sigma, native rate.
struct MetricProfile {
    double mean = 0.0;
    double sigma = 1.0;
    int rate_hz = 100;
};

/// Frozen default calibration for the host metric baselines (eBPF-style
/// metrics at 100 Hz, NVML-style gpu_* metrics at 10 Hz).
const std::map<MetricId, MetricProfile>& default_metric_profiles();

/// How a disturbance moves each series. metric_gain is in units of the
/// metric's own baseline sigma per sigma of disturbance magnitude; negative
/// gains push the metric down (gpu_power under throttling).
struct Coupling {
    std::map<MetricId, double> metric_gain;
    double latency_gain = 1.0;

    double gain(MetricId id) const {
        const auto it = metric_gain.find(id);
        return it == metric_gain.end() ? 0.0 : it->second;
    }
};

/// Frozen default coupling per kind: in-category primaries at full gain,
/// in-category secondaries reduced, one out-of-category confuser at 0.25x.
Coupling default_coupling(DisturbanceKind kind);

/// Random short bursts on host metrics, independent of the injected
/// disturbance. Models co-tenant cross traffic; never touches the target.
struct BackgroundBurstModel {
    double rate_per_s = 0.3;
    double min_amp_sigma = 2.0;
    double max_amp_sigma = 9.0;
    double min_duration_s = 0.5;
    double max_duration_s = 3.5;
    double ramp_ms = 100.0;
};

struct WorkloadModel {
    double base_latency_us = 500.0;  // mean all-reduce latency at 1 MiB
    double jitter_sigma_us = 20.0;
    std::int64_t message_size_bytes = 1 << 20;  // scales the latency mean
    double duration_s = 60.0;
    std::uint64_t seed = 1;
    /// Baseline noise is Gaussian truncated at this many sigma. Keeps the
    /// stationary max z-score strictly below the 3-sigma spike gate.
    double noise_clip_sigma = 2.5;
    BackgroundBurstModel background;
};

/// Latency-mean multiplier for a message size, 1.0 at 1 MiB
/// (log-interpolated between calibration points).
double message_size_scale(std::int64_t message_size_bytes);

struct Disturbance {
    DisturbanceKind kind = DisturbanceKind::D3_NIC;
    double onset_s = 40.0;
    double duration_s = 10.0;       // footprint including both ramps
    double magnitude_sigma = 6.0;   // primary-metric deviation in baseline sigma
    double latency_lag_ms = 0.0;    // host rise to latency rise, [0, 200]
    double ramp_ms = 200.0;         // linear rise/fall; 0 gives a step
    /// Interference intensity wobble: all coupled series share one smooth
    /// modulation process (the latency sees it latency_lag_ms later), so
    /// they keep co-fluctuating inside a sustained plateau. 0 disables.
    double modulation_depth = 0.25;
    std::optional<Coupling> coupling;  // default_coupling(kind) when unset
};

struct Scenario {
    WorkloadModel workload;
    std::optional<Disturbance> disturbance;

    /// Ground-truth cause; nullopt iff no disturbance.
    std::optional<CauseCategory> label() const;
};

/// Raised-plateau profile in [0, 1]: linear ramp, hold, linear fall over the
/// footprint [onset, onset + duration].
double plateau_shape(double t_s, double onset_s, double duration_s,
                     double ramp_s);

/// Generates the full labeled telemetry set for a scenario. Identical
/// scenarios (including seed) produce bit-identical series. Throws
/// InvalidScenario when the disturbance footprint leaves the trace.
std::map<MetricId, MetricSeries> generate(const Scenario& scenario);

/// One evaluation trial.
struct TrialResult {
    std::optional<CauseCategory> truth;
    std::optional<CauseCategory> predicted;
    bool detected = false;
    bool correct = false;
    double time_to_rca_s = 0.0;
    std::optional<Diagnosis> diagnosis;
};

/// Streams a generated scenario through detect -> diagnose. Engine errors
/// (e.g. a trace too short for a baseline) become missed-detection outcomes,
/// not crashes.
TrialResult run_trial(const Scenario& scenario, const EngineParams& params);

}  // namespace tailrca
