// SPDX-License-Identifier: Apache-2.0
#include "tailrca/correlation_rca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tailrca {

namespace {

constexpr double kDegenerateNorm = 1e-12;

double mean_of(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double centered_norm(std::span<const double> xs, double mu) {
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - mu;
        ss += d * d;
    }
    return std::sqrt(ss);
}

// Numerator of the printed formula: sum over the overlapping pairs of
// (lead[t] - mu_lead) * (lag_series[t + k] - mu_lag), k >= 0.
double lag_numerator(std::span<const double> lead, double mu_lead,
                     std::span<const double> lagged, double mu_lag, int k) {
    const std::size_t n = lead.size();
    double sum = 0.0;
    for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t) {
        sum += (lead[t] - mu_lead) *
               (lagged[t + static_cast<std::size_t>(k)] - mu_lag);
    }
    return sum;
}

}  // namespace

CorrelationResult lagged_xcorr(std::span<const double> target,
                               std::span<const double> metric, int max_lag,
                               MetricId metric_id) {
    if (max_lag < 0) throw ConfigError("max_lag must be >= 0");
    if (target.size() != metric.size()) {
        throw ConfigError("lagged_xcorr requires equal-length sequences");
    }
    const std::size_t n = target.size();
    if (n < static_cast<std::size_t>(2 * max_lag + 2)) {
        throw ConfigError("lagged_xcorr requires N >= 2K+2");
    }

    const double mu_t = mean_of(target);
    const double mu_m = mean_of(metric);
    const double norm_t = centered_norm(target, mu_t);
    const double norm_m = centered_norm(metric, mu_m);
    if (norm_t < kDegenerateNorm || norm_m < kDegenerateNorm) {
        throw DegenerateSeries("constant series in lagged_xcorr for " +
                               std::string(metric_name(metric_id)));
    }
    const double denom = norm_t * norm_m;

    CorrelationResult result;
    result.metric = metric_id;
    result.max_lag = max_lag;
    result.rho_curve.resize(static_cast<std::size_t>(2 * max_lag + 1));
    for (int k = -max_lag; k <= max_lag; ++k) {
        const double num =
            k >= 0 ? lag_numerator(target, mu_t, metric, mu_m, k)
                   : lag_numerator(metric, mu_m, target, mu_t, -k);
        result.rho_curve[static_cast<std::size_t>(k + max_lag)] = num / denom;
    }

    // Scan order 0, -1, +1, -2, +2, ... realizes the tie-break: smallest |k|
    // first, negative before positive.
    int best_lag = 0;
    double best = std::abs(result.rho(0));
    for (int a = 1; a <= max_lag; ++a) {
        for (int k : {-a, a}) {
            const double c = std::abs(result.rho(k));
            if (c > best) {
                best = c;
                best_lag = k;
            }
        }
    }
    result.best_lag = best_lag;
    result.best_corr = best;
    return result;
}

double normalize_spike(double score_sigma, double cap) {
    return std::min(std::max(score_sigma, 0.0), cap) / cap;
}

Diagnosis diagnose(const AlignedFrame& frame, const SpikeReport& spike,
                   const std::map<MetricId, BaselineStats>& baselines,
                   const RcaParams& params,
                   std::optional<std::int64_t> onset_ts,
                   std::optional<std::int64_t> detected_ts) {
    if (!spike.is_spike) {
        throw ConfigError("diagnose requires a confirmed spike");
    }
    const TimeInterval window{frame.window_start, frame.window_end};
    const double ms_per_sample = 1000.0 / frame.grid_hz;

    Diagnosis diagnosis;
    diagnosis.spike = spike;

    for (MetricId id : host_metrics()) {
        const auto series_it = frame.hosts.find(id);
        if (series_it == frame.hosts.end()) continue;  // ablated or absent
        const MetricSeries& series = series_it->second;
        const BaselineStats& stats = baselines.at(id);

        const SpikeReport metric_spike =
            spike_score(series, stats, window, params.threshold_sigma);

        Evidence ev;
        ev.metric = id;
        ev.spike_score_norm =
            normalize_spike(metric_spike.score, params.spike_cap);
        try {
            const CorrelationResult corr =
                lagged_xcorr(frame.target.values, series.values,
                             params.max_lag, id);
            ev.correlation = corr.best_corr;
            ev.best_lag_samples = corr.best_lag;
            ev.best_lag_ms = corr.best_lag * ms_per_sample;
        } catch (const DegenerateSeries&) {
            ev.degenerate = true;  // spike term carries the evidence alone
        }
        ev.confidence =
            params.alpha * ev.spike_score_norm +
            (1.0 - params.alpha) * ev.correlation;
        diagnosis.evidence.push_back(ev);
    }

    // Category confidence: max over member metrics, 0 when none present.
    for (CauseCategory c : all_categories()) {
        CategoryScore score;
        score.category = c;
        for (const Evidence& ev : diagnosis.evidence) {
            if (metric_category(ev.metric) == c) {
                score.confidence = std::max(score.confidence, ev.confidence);
            }
        }
        diagnosis.ranking.push_back(score);
    }
    std::stable_sort(diagnosis.ranking.begin(), diagnosis.ranking.end(),
                     [](const CategoryScore& a, const CategoryScore& b) {
                         return a.confidence > b.confidence;
                     });
    diagnosis.top_cause = diagnosis.ranking.front().category;
    diagnosis.low_confidence =
        diagnosis.ranking.front().confidence < params.low_confidence;

    diagnosis.onset_ts =
        onset_ts.value_or(spike.onset_ts.value_or(window.start_ns));
    diagnosis.detected_ts = detected_ts.value_or(window.end_ns);
    diagnosis.rca_ts =
        diagnosis.detected_ts +
        static_cast<std::int64_t>(params.analysis_budget_s * 1e9);
    diagnosis.time_to_rca_s =
        static_cast<double>(diagnosis.rca_ts - diagnosis.onset_ts) / 1e9;
    return diagnosis;
}

}  // namespace tailrca
