// SPDX-License-Identifier: Apache-2.0
#include "tailrca/spike_detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

namespace tailrca {

namespace {

// [i0, i1) index range of `window` within the series; throws when the window
// is not covered.
std::pair<std::size_t, std::size_t> window_range(const MetricSeries& series,
                                                 TimeInterval window) {
    if (window.start_ns < series.start_ts || window.end_ns > series.end_ts() ||
        window.start_ns > window.end_ns) {
        throw WindowOutOfRange(
            "window [" + std::to_string(window.start_ns) + ", " +
            std::to_string(window.end_ns) + ") not covered by series " +
            std::string(metric_name(series.id)));
    }
    return {series.index_at_or_after(window.start_ns),
            series.index_at_or_after(window.end_ns)};
}

}  // namespace

BaselineStats baseline(const MetricSeries& series, TimeInterval window,
                       const DetectionParams& params) {
    std::size_t i0 = 0, i1 = 0;
    try {
        std::tie(i0, i1) = window_range(series, window);
    } catch (const WindowOutOfRange&) {
        throw InsufficientBaseline(
            "baseline window not covered by series " +
            std::string(metric_name(series.id)));
    }
    const std::size_t n = i1 - i0;
    if (n < static_cast<std::size_t>(params.min_baseline_samples)) {
        throw InsufficientBaseline(
            "baseline window holds " + std::to_string(n) + " samples, need " +
            std::to_string(params.min_baseline_samples));
    }
    double sum = 0.0;
    for (std::size_t i = i0; i < i1; ++i) sum += series.values[i];
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
        const double d = series.values[i] - mu;
        ss += d * d;
    }
    BaselineStats stats;
    stats.metric = series.id;
    stats.mu = mu;
    stats.sigma = std::max(std::sqrt(ss / static_cast<double>(n)),
                           params.sigma_floor);
    stats.window = window;
    stats.sample_count = n;
    return stats;
}

SpikeReport spike_score(const MetricSeries& series, const BaselineStats& stats,
                        TimeInterval window, double threshold_sigma) {
    const auto [i0, i1] = window_range(series, window);
    SpikeReport report;
    report.metric = series.id;
    report.window = window;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_i = i0;
    for (std::size_t i = i0; i < i1; ++i) {
        const double z = (series.values[i] - stats.mu) / stats.sigma;
        if (z > best) {  // strict: ties keep the earliest timestamp
            best = z;
            best_i = i;
        }
    }
    if (i0 == i1) {
        report.score = 0.0;
        report.peak_ts = window.start_ns;
        return report;
    }
    report.score = best;
    report.peak_ts = series.ts_at(best_i);
    report.is_spike = best > threshold_sigma;
    if (report.is_spike) {
        report.onset_ts = spike_onset(series, stats, window, threshold_sigma);
    }
    return report;
}

std::int64_t spike_onset(const MetricSeries& series, const BaselineStats& stats,
                         TimeInterval window, double threshold_sigma) {
    const auto [i0, i1] = window_range(series, window);
    const double bar = stats.mu + threshold_sigma * stats.sigma;
    for (std::size_t i = i0; i < i1; ++i) {
        if (series.values[i] > bar) return series.ts_at(i);
    }
    throw NoOnset("no sample above threshold in window for " +
                  std::string(metric_name(series.id)));
}

std::optional<SpikeReport> detect(const MetricSeries& target, std::int64_t now,
                                  const DetectionParams& params) {
    const std::int64_t w = params.observation_window_ns();
    const std::int64_t wb = params.baseline_window_ns();
    const TimeInterval obs{now - w, now};
    const TimeInterval base{now - w - wb, now - w};
    const BaselineStats stats = baseline(target, base, params);
    const SpikeReport report =
        spike_score(target, stats, obs, params.threshold_sigma);
    if (!report.is_spike) return std::nullopt;
    return report;
}

std::optional<ConfirmedSpike> SpikeDetector::step(const MetricSeries& target,
                                                  std::int64_t now) {
    const std::int64_t w = params_.observation_window_ns();
    const std::int64_t wb = params_.baseline_window_ns();
    const TimeInterval obs{now - w, now};
    const TimeInterval base{now - w - wb, now - w};
    const BaselineStats stats = baseline(target, base, params_);
    const SpikeReport report =
        spike_score(target, stats, obs, params_.threshold_sigma);

    if (!report.is_spike) {
        pending_onset_.reset();
        in_episode_ = false;
        return std::nullopt;
    }
    if (in_episode_) return std::nullopt;
    if (!pending_onset_) pending_onset_ = report.onset_ts;

    if (now - *pending_onset_ >= w) {
        ConfirmedSpike confirmed;
        confirmed.report = report;
        confirmed.onset_ts = *pending_onset_;
        confirmed.detected_ts = now;
        pending_onset_.reset();
        in_episode_ = true;
        return confirmed;
    }
    return std::nullopt;
}

void SpikeDetector::reset() {
    pending_onset_.reset();
    in_episode_ = false;
}

}  // namespace tailrca
