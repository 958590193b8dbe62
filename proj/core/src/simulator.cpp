// SPDX-License-Identifier: Apache-2.0
#include "tailrca/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailrca/rng.hpp"

namespace tailrca {

namespace {

constexpr std::uint64_t kBurstStreamSalt = 0x42;
constexpr std::uint64_t kModulationStreamSalt = 0x77;
constexpr int kModulationRateHz = 100;

constexpr std::int64_t kMinMessageBytes = 1LL << 10;  // 1 KiB
constexpr std::int64_t kMaxMessageBytes = 1LL << 26;  // 64 MiB

struct Burst {
    MetricId metric = MetricId::NetRxSoftirq;
    double onset_s = 0.0;
    double duration_s = 0.0;
    double amp_sigma = 0.0;
};

// Shared interference-intensity process: moving-average-smoothed unit-variance
// Gaussian noise on the 100 Hz grid. Every coupled metric multiplies its
// disturbance contribution by (1 + depth * w); the target samples the same
// process shifted by the latency lag, which is what makes the lag recoverable
// from a sustained plateau.
std::vector<double> draw_modulation(const WorkloadModel& workload) {
    const auto n = static_cast<std::size_t>(
        std::llround(workload.duration_s * kModulationRateHz));
    Rng rng(derive_seed(workload.seed, kModulationStreamSalt));
    std::vector<double> white(n);
    for (double& w : white) w = rng.normal();
    constexpr std::size_t kSmooth = 5;
    std::vector<double> out(n, 0.0);
    double window_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        window_sum += white[i];
        if (i >= kSmooth) window_sum -= white[i - kSmooth];
        const auto count = std::min(i + 1, kSmooth);
        // scale restores unit variance after averaging
        out[i] = window_sum / static_cast<double>(count) *
                 std::sqrt(static_cast<double>(count));
    }
    return out;
}

std::vector<Burst> draw_bursts(const WorkloadModel& workload) {
    const BackgroundBurstModel& model = workload.background;
    std::vector<Burst> bursts;
    if (model.rate_per_s <= 0.0) return bursts;
    Rng rng(derive_seed(workload.seed, kBurstStreamSalt));
    const auto& hosts = host_metrics();
    double t = 0.0;
    for (;;) {
        t += -std::log(1.0 - rng.uniform()) / model.rate_per_s;
        if (t >= workload.duration_s) break;
        Burst b;
        b.metric = hosts[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(hosts.size()) - 1))];
        b.amp_sigma = rng.uniform(model.min_amp_sigma, model.max_amp_sigma);
        b.duration_s =
            rng.uniform(model.min_duration_s, model.max_duration_s);
        b.onset_s = t;
        bursts.push_back(b);
    }
    return bursts;
}

void validate(const Scenario& scenario) {
    const WorkloadModel& w = scenario.workload;
    if (w.base_latency_us <= 0.0) {
        throw InvalidScenario("base_latency_us must be positive");
    }
    if (w.jitter_sigma_us < 0.0) {
        throw InvalidScenario("jitter_sigma_us must be non-negative");
    }
    if (w.duration_s <= 0.0) {
        throw InvalidScenario("duration_s must be positive");
    }
    if (w.noise_clip_sigma <= 0.0) {
        throw InvalidScenario("noise_clip_sigma must be positive");
    }
    if (w.message_size_bytes < kMinMessageBytes ||
        w.message_size_bytes > kMaxMessageBytes) {
        throw InvalidScenario("message_size_bytes outside [1 KiB, 64 MiB]");
    }
    if (!scenario.disturbance) return;
    const Disturbance& d = *scenario.disturbance;
    if (d.duration_s <= 0.0 || d.magnitude_sigma < 0.0 || d.ramp_ms < 0.0 ||
        d.modulation_depth < 0.0) {
        throw InvalidScenario("disturbance duration/magnitude/ramp invalid");
    }
    if (d.latency_lag_ms < 0.0 || d.latency_lag_ms > 200.0) {
        throw InvalidScenario("latency_lag_ms outside [0, 200]");
    }
    if (d.onset_s < 0.0 ||
        d.onset_s + d.duration_s + d.latency_lag_ms / 1000.0 >
            w.duration_s) {
        throw InvalidScenario("disturbance extends past trace end");
    }
}

}  // namespace

CauseCategory disturbance_category(DisturbanceKind kind) {
    switch (kind) {
        case DisturbanceKind::D1_IO: return CauseCategory::IO;
        case DisturbanceKind::D2_CPU: return CauseCategory::CPU;
        case DisturbanceKind::D3_NIC: return CauseCategory::NIC;
        case DisturbanceKind::D4_GPU_THROTTLE: return CauseCategory::GPU;
    }
    return CauseCategory::IO;
}

DisturbanceKind kind_for_category(CauseCategory category) {
    switch (category) {
        case CauseCategory::IO: return DisturbanceKind::D1_IO;
        case CauseCategory::CPU: return DisturbanceKind::D2_CPU;
        case CauseCategory::NIC: return DisturbanceKind::D3_NIC;
        case CauseCategory::GPU: return DisturbanceKind::D4_GPU_THROTTLE;
    }
    return DisturbanceKind::D1_IO;
}

std::string_view kind_name(DisturbanceKind kind) {
    switch (kind) {
        case DisturbanceKind::D1_IO: return "D1_IO";
        case DisturbanceKind::D2_CPU: return "D2_CPU";
        case DisturbanceKind::D3_NIC: return "D3_NIC";
        case DisturbanceKind::D4_GPU_THROTTLE: return "D4_GPU_THROTTLE";
    }
    return "unknown";
}

std::optional<DisturbanceKind> kind_from_name(std::string_view name) {
    for (DisturbanceKind k :
         {DisturbanceKind::D1_IO, DisturbanceKind::D2_CPU,
          DisturbanceKind::D3_NIC, DisturbanceKind::D4_GPU_THROTTLE}) {
        if (kind_name(k) == name) return k;
    }
    return std::nullopt;
}

MetricId primary_metric(DisturbanceKind kind) {
    switch (kind) {
        case DisturbanceKind::D1_IO: return MetricId::BlkioThroughput;
        case DisturbanceKind::D2_CPU: return MetricId::SchedSwitch;
        case DisturbanceKind::D3_NIC: return MetricId::NetRxSoftirq;
        case DisturbanceKind::D4_GPU_THROTTLE: return MetricId::GpuTemp;
    }
    return MetricId::BlkioThroughput;
}

const std::map<MetricId, MetricProfile>& default_metric_profiles() {
    static const std::map<MetricId, MetricProfile> profiles = {
        {MetricId::NetRxSoftirq, {150.0, 12.0, 100}},
        {MetricId::NicQueueLen, {40.0, 6.0, 100}},
        {MetricId::SchedSwitch, {300.0, 25.0, 100}},
        {MetricId::BlkioThroughput, {2.0e8, 1.5e7, 100}},
        {MetricId::PcieThroughput, {6.0e9, 4.0e8, 100}},
        {MetricId::GpuUtil, {92.0, 2.5, 10}},
        {MetricId::GpuMem, {68.0, 1.5, 10}},
        {MetricId::GpuPower, {310.0, 8.0, 10}},
        {MetricId::GpuTemp, {64.0, 1.2, 10}},
    };
    return profiles;
}

Coupling default_coupling(DisturbanceKind kind) {
    Coupling c;
    switch (kind) {
        case DisturbanceKind::D1_IO:
            c.metric_gain = {{MetricId::BlkioThroughput, 1.0},
                             {MetricId::PcieThroughput, 0.6},
                             {MetricId::SchedSwitch, 0.25}};
            break;
        case DisturbanceKind::D2_CPU:
            c.metric_gain = {{MetricId::SchedSwitch, 1.0},
                             {MetricId::BlkioThroughput, 0.25}};
            break;
        case DisturbanceKind::D3_NIC:
            c.metric_gain = {{MetricId::NetRxSoftirq, 1.0},
                             {MetricId::NicQueueLen, 0.6},
                             {MetricId::SchedSwitch, 0.25}};
            break;
        case DisturbanceKind::D4_GPU_THROTTLE:
            // power drops under a lowered cap, temperature carries the
            // upper-tail evidence, utilization sags
            c.metric_gain = {{MetricId::GpuTemp, 1.0},
                             {MetricId::GpuPower, -1.0},
                             {MetricId::GpuUtil, -0.5},
                             {MetricId::BlkioThroughput, 0.25}};
            break;
    }
    c.latency_gain = 1.0;
    return c;
}

double message_size_scale(std::int64_t message_size_bytes) {
    // (log2 bytes, scale) calibration points; 1 MiB defines scale 1.
    static const std::vector<std::pair<double, double>> points = {
        {10.0, 0.15}, {16.0, 0.4}, {20.0, 1.0}, {24.0, 5.0}, {26.0, 16.0}};
    const double x = std::log2(static_cast<double>(std::clamp(
        message_size_bytes, kMinMessageBytes, kMaxMessageBytes)));
    if (x <= points.front().first) return points.front().second;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (x <= points[i].first) {
            const auto [x0, y0] = points[i - 1];
            const auto [x1, y1] = points[i];
            const double f = (x - x0) / (x1 - x0);
            return y0 * std::pow(y1 / y0, f);
        }
    }
    return points.back().second;
}

std::optional<CauseCategory> Scenario::label() const {
    if (!disturbance) return std::nullopt;
    return disturbance_category(disturbance->kind);
}

double plateau_shape(double t_s, double onset_s, double duration_s,
                     double ramp_s) {
    const double rel = t_s - onset_s;
    if (rel < 0.0 || rel > duration_s) return 0.0;
    if (ramp_s <= 0.0) return 1.0;
    return std::min({1.0, rel / ramp_s, (duration_s - rel) / ramp_s});
}

std::map<MetricId, MetricSeries> generate(const Scenario& scenario) {
    validate(scenario);
    const WorkloadModel& workload = scenario.workload;
    const std::vector<Burst> bursts = draw_bursts(workload);
    std::vector<double> modulation;
    if (scenario.disturbance && scenario.disturbance->modulation_depth > 0.0) {
        modulation = draw_modulation(workload);
    }

    const Coupling coupling =
        scenario.disturbance
            ? scenario.disturbance->coupling.value_or(
                  default_coupling(scenario.disturbance->kind))
            : Coupling{};

    std::map<MetricId, MetricSeries> out;
    const auto& metrics = all_metrics();
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        const MetricId id = metrics[m];
        double mean, sigma;
        int rate;
        if (id == MetricId::NcclLatency) {
            mean = workload.base_latency_us *
                   message_size_scale(workload.message_size_bytes);
            sigma = workload.jitter_sigma_us;
            rate = 100;
        } else {
            const MetricProfile& p = default_metric_profiles().at(id);
            mean = p.mean;
            sigma = p.sigma;
            rate = p.rate_hz;
        }

        std::vector<Burst> own_bursts;
        for (const Burst& b : bursts) {
            if (b.metric == id) own_bursts.push_back(b);
        }

        Rng rng(derive_seed(workload.seed, m));
        MetricSeries series;
        series.id = id;
        series.grid_hz = rate;
        series.start_ts = 0;
        const auto n = static_cast<std::size_t>(
            std::llround(workload.duration_s * rate));
        series.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / rate;
            double v =
                mean + sigma * rng.truncated_normal(workload.noise_clip_sigma);
            if (scenario.disturbance) {
                const Disturbance& d = *scenario.disturbance;
                const double ramp_s = d.ramp_ms / 1000.0;
                const bool is_target = id == MetricId::NcclLatency;
                const double t_eff =
                    is_target ? t - d.latency_lag_ms / 1000.0 : t;
                double shape =
                    plateau_shape(t_eff, d.onset_s, d.duration_s, ramp_s);
                if (shape > 0.0 && !modulation.empty()) {
                    const auto idx = static_cast<std::size_t>(std::clamp<std::int64_t>(
                        std::llround(t_eff * kModulationRateHz), 0,
                        static_cast<std::int64_t>(modulation.size()) - 1));
                    shape *= std::max(
                        0.0, 1.0 + d.modulation_depth * modulation[idx]);
                }
                const double gain =
                    is_target ? coupling.latency_gain : coupling.gain(id);
                v += gain * d.magnitude_sigma * sigma * shape;
            }
            for (const Burst& b : own_bursts) {
                v += b.amp_sigma * sigma *
                     plateau_shape(t, b.onset_s, b.duration_s,
                                   workload.background.ramp_ms / 1000.0);
            }
            if (id == MetricId::NcclLatency) v = std::max(v, 1.0);
            series.values[i] = v;
        }
        out.emplace(id, std::move(series));
    }
    return out;
}

TrialResult run_trial(const Scenario& scenario, const EngineParams& params) {
    TrialResult trial;
    trial.truth = scenario.label();
    const auto series = generate(scenario);
    try {
        const RunResult result = DiagnosisEngine(params).run(series);
        if (!result.diagnoses.empty()) {
            const Diagnosis& d = result.diagnoses.front();
            trial.detected = true;
            trial.predicted = d.top_cause;
            trial.correct = trial.truth && *trial.truth == d.top_cause;
            trial.time_to_rca_s = d.time_to_rca_s;
            trial.diagnosis = d;
        }
    } catch (const Error&) {
        // engine failure counts as a missed detection, not a crash
    }
    return trial;
}

}  // namespace tailrca
