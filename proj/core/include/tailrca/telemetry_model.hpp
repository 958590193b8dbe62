// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "tailrca/errors.hpp"

namespace tailrca {

/// Closed metric enumeration. nccl_latency is the target series; every other
/// metric maps to exactly one cause category. Extending the set means adding
/// an enumerator here plus entries in metric_name() and metric_category();
/// the taxonomy tests enforce that the mapping stays total.
enum class MetricId {
    NcclLatency,
    NetRxSoftirq,
    NicQueueLen,
    SchedSwitch,
    BlkioThroughput,
    PcieThroughput,
    GpuUtil,
    GpuMem,
    GpuPower,
    GpuTemp,
};

inline constexpr int kMetricCount = 10;

enum class CauseCategory { IO, CPU, NIC, GPU };

inline constexpr int kCategoryCount = 4;

/// All metrics in declaration order (target first).
const std::vector<MetricId>& all_metrics();

/// Host metrics in declaration order (everything except the target).
const std::vector<MetricId>& host_metrics();

/// Cause categories in declaration order; this order is the deterministic
/// tie-break used by the ranking.
const std::vector<CauseCategory>& all_categories();

std::string_view metric_name(MetricId id);
std::optional<MetricId> metric_from_name(std::string_view name);

std::string_view category_name(CauseCategory c);
std::optional<CauseCategory> category_from_name(std::string_view name);

/// Fixed taxonomy mapping; nullopt only for the target series.
std::optional<CauseCategory> metric_category(MetricId id);

/// Index of a category in declaration order.
int category_index(CauseCategory c);

/// One raw measurement. Timestamps are integer nanoseconds on a monotonic
/// clock; values are finite reals in the metric's native unit.
struct Sample {
    std::int64_t ts_ns = 0;
    double value = 0.0;
};

using SampleStreams = std::map<MetricId, std::vector<Sample>>;

/// Half-open interval [start_ns, end_ns).
struct TimeInterval {
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;

    std::int64_t length_ns() const { return end_ns - start_ns; }
    bool contains(std::int64_t t) const { return t >= start_ns && t < end_ns; }
};

/// Uniformly gridded sample sequence for one metric. Sample i sits at
/// start_ts + i * (1e9 / grid_hz); grid_hz must divide 1e9 exactly.
struct MetricSeries {
    MetricId id = MetricId::NcclLatency;
    int grid_hz = 100;
    std::int64_t start_ts = 0;
    std::vector<double> values;

    std::int64_t step_ns() const { return 1'000'000'000LL / grid_hz; }
    std::int64_t ts_at(std::size_t i) const {
        return start_ts + static_cast<std::int64_t>(i) * step_ns();
    }
    std::int64_t end_ts() const { return ts_at(values.size()); }
    TimeInterval span() const { return {start_ts, end_ts()}; }

    /// Index of the first sample with ts >= t (clamped to size()).
    std::size_t index_at_or_after(std::int64_t t) const;

    /// Grid-aligned sub-series covering `window`; throws WindowOutOfRange.
    MetricSeries slice(TimeInterval window) const;

    /// The series as a raw sample stream.
    std::vector<Sample> to_samples() const;
};

/// Target plus host series on one common grid with identical bounds.
struct AlignedFrame {
    int grid_hz = 100;
    std::int64_t window_start = 0;
    std::int64_t window_end = 0;
    MetricSeries target;
    std::map<MetricId, MetricSeries> hosts;

    std::size_t length() const { return target.values.size(); }
    AlignedFrame slice(TimeInterval window) const;
};

struct AlignParams {
    int grid_hz = 100;
    /// Dropout bound: a grid point with no sample in the trailing max_gap
    /// window means the collector died. Shorter than the observation window
    /// so a dead stream cannot silently poison it.
    std::int64_t max_gap_ns = 2'000'000'000LL;
};

/// Zero-order-hold resampling of one raw stream onto the grid over `window`.
/// Each grid point takes the latest sample at or before it.
std::vector<double> hold_resample(const std::vector<Sample>& raw, MetricId id,
                                  TimeInterval window, int grid_hz,
                                  std::int64_t max_gap_ns);

/// Aligns raw streams onto the common grid. The nccl_latency stream is
/// required and becomes the frame target; all remaining streams become host
/// series. Throws EmptyStream / GapTooLarge per stream.
AlignedFrame align(const SampleStreams& raw, TimeInterval window,
                   const AlignParams& params = {});

}  // namespace tailrca
