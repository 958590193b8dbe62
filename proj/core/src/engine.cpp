// SPDX-License-Identifier: Apache-2.0
#include "tailrca/engine.hpp"

#include <string>

namespace tailrca {

RunResult DiagnosisEngine::run(const SampleStreams& streams) const {
    const auto target_it = streams.find(MetricId::NcclLatency);
    if (target_it == streams.end() || target_it->second.empty()) {
        throw EmptyStream("engine requires a nccl_latency stream");
    }

    const std::int64_t step = 1'000'000'000LL / params_.grid_hz;
    const std::int64_t t0 = target_it->second.front().ts_ns;
    const std::int64_t t_last = target_it->second.back().ts_ns;
    // Grid covers every target sample.
    const std::int64_t t_end = t0 + ((t_last - t0) / step + 1) * step;

    const std::int64_t w = params_.detection.observation_window_ns();
    const std::int64_t wb = params_.detection.baseline_window_ns();
    if (t_end - t0 < w + wb) {
        throw InsufficientBaseline(
            "capture of " + std::to_string((t_end - t0) / 1000000) +
            " ms is shorter than baseline + observation window");
    }

    AlignParams align_params;
    align_params.grid_hz = params_.grid_hz;
    align_params.max_gap_ns = params_.max_gap_ns;
    const AlignedFrame full = align(streams, {t0, t_end}, align_params);

    RunResult result;
    SpikeDetector detector(params_.detection);
    const std::int64_t stride = params_.detection.stride_ns();
    for (std::int64_t now = t0 + wb + w; now <= t_end; now += stride) {
        ++result.evaluations;
        const auto confirmed = detector.step(full.target, now);
        if (!confirmed) continue;

        const TimeInterval obs{now - w, now};
        const TimeInterval base{now - w - wb, now - w};
        AlignedFrame frame = full.slice(obs);
        for (MetricId id : params_.ablated) frame.hosts.erase(id);

        std::map<MetricId, BaselineStats> baselines;
        for (const auto& [id, series] : full.hosts) {
            if (params_.ablated.count(id)) continue;
            baselines.emplace(id, baseline(series, base, params_.detection));
        }
        result.diagnoses.push_back(diagnose(frame, confirmed->report,
                                            baselines, params_.rca,
                                            confirmed->onset_ts,
                                            confirmed->detected_ts));
    }
    return result;
}

RunResult DiagnosisEngine::run(
    const std::map<MetricId, MetricSeries>& series) const {
    SampleStreams streams;
    for (const auto& [id, s] : series) streams.emplace(id, s.to_samples());
    return run(streams);
}

}  // namespace tailrca
