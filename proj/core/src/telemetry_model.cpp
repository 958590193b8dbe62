// SPDX-License-Identifier: Apache-2.0
#include "tailrca/telemetry_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tailrca {

const std::vector<MetricId>& all_metrics() {
    static const std::vector<MetricId> metrics = {
        MetricId::NcclLatency,    MetricId::NetRxSoftirq, MetricId::NicQueueLen,
        MetricId::SchedSwitch,    MetricId::BlkioThroughput,
        MetricId::PcieThroughput, MetricId::GpuUtil,      MetricId::GpuMem,
        MetricId::GpuPower,       MetricId::GpuTemp,
    };
    return metrics;
}

const std::vector<MetricId>& host_metrics() {
    static const std::vector<MetricId> metrics = [] {
        std::vector<MetricId> out;
        for (MetricId id : all_metrics()) {
            if (id != MetricId::NcclLatency) out.push_back(id);
        }
        return out;
    }();
    return metrics;
}

const std::vector<CauseCategory>& all_categories() {
    static const std::vector<CauseCategory> categories = {
        CauseCategory::IO, CauseCategory::CPU, CauseCategory::NIC,
        CauseCategory::GPU};
    return categories;
}

std::string_view metric_name(MetricId id) {
    switch (id) {
        case MetricId::NcclLatency: return "nccl_latency";
        case MetricId::NetRxSoftirq: return "net_rx_softirq";
        case MetricId::NicQueueLen: return "nic_queue_len";
        case MetricId::SchedSwitch: return "sched_switch";
        case MetricId::BlkioThroughput: return "blkio_throughput";
        case MetricId::PcieThroughput: return "pcie_throughput";
        case MetricId::GpuUtil: return "gpu_util";
        case MetricId::GpuMem: return "gpu_mem";
        case MetricId::GpuPower: return "gpu_power";
        case MetricId::GpuTemp: return "gpu_temp";
    }
    return "unknown";
}

std::optional<MetricId> metric_from_name(std::string_view name) {
    for (MetricId id : all_metrics()) {
        if (metric_name(id) == name) return id;
    }
    return std::nullopt;
}

std::string_view category_name(CauseCategory c) {
    switch (c) {
        case CauseCategory::IO: return "IO";
        case CauseCategory::CPU: return "CPU";
        case CauseCategory::NIC: return "NIC";
        case CauseCategory::GPU: return "GPU";
    }
    return "unknown";
}

std::optional<CauseCategory> category_from_name(std::string_view name) {
    for (CauseCategory c : all_categories()) {
        if (category_name(c) == name) return c;
    }
    return std::nullopt;
}

std::optional<CauseCategory> metric_category(MetricId id) {
    switch (id) {
        case MetricId::NcclLatency: return std::nullopt;
        case MetricId::BlkioThroughput:
        case MetricId::PcieThroughput: return CauseCategory::IO;
        case MetricId::SchedSwitch: return CauseCategory::CPU;
        case MetricId::NetRxSoftirq:
        case MetricId::NicQueueLen: return CauseCategory::NIC;
        case MetricId::GpuUtil:
        case MetricId::GpuMem:
        case MetricId::GpuPower:
        case MetricId::GpuTemp: return CauseCategory::GPU;
    }
    return std::nullopt;
}

int category_index(CauseCategory c) { return static_cast<int>(c); }

std::size_t MetricSeries::index_at_or_after(std::int64_t t) const {
    if (t <= start_ts) return 0;
    const std::int64_t step = step_ns();
    // ceil((t - start_ts) / step) for positive offsets
    const std::int64_t off = (t - start_ts + step - 1) / step;
    return std::min(static_cast<std::size_t>(off), values.size());
}

MetricSeries MetricSeries::slice(TimeInterval window) const {
    if (window.start_ns < start_ts || window.end_ns > end_ts() ||
        window.start_ns > window.end_ns) {
        throw WindowOutOfRange("slice window [" +
                               std::to_string(window.start_ns) + ", " +
                               std::to_string(window.end_ns) +
                               ") outside series span for " +
                               std::string(metric_name(id)));
    }
    const std::size_t i0 = index_at_or_after(window.start_ns);
    const std::size_t i1 = index_at_or_after(window.end_ns);
    MetricSeries out;
    out.id = id;
    out.grid_hz = grid_hz;
    out.start_ts = ts_at(i0);
    out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(i0),
                      values.begin() + static_cast<std::ptrdiff_t>(i1));
    return out;
}

std::vector<Sample> MetricSeries::to_samples() const {
    std::vector<Sample> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({ts_at(i), values[i]});
    }
    return out;
}

AlignedFrame AlignedFrame::slice(TimeInterval window) const {
    AlignedFrame out;
    out.grid_hz = grid_hz;
    out.window_start = window.start_ns;
    out.window_end = window.end_ns;
    out.target = target.slice(window);
    for (const auto& [id, series] : hosts) {
        out.hosts.emplace(id, series.slice(window));
    }
    return out;
}

std::vector<double> hold_resample(const std::vector<Sample>& raw, MetricId id,
                                  TimeInterval window, int grid_hz,
                                  std::int64_t max_gap_ns) {
    if (raw.empty()) {
        throw EmptyStream("no samples for " + std::string(metric_name(id)));
    }
    if (grid_hz <= 0 || 1'000'000'000LL % grid_hz != 0) {
        throw ConfigError("grid_hz must be positive and divide 1e9 exactly");
    }
    const std::int64_t step = 1'000'000'000LL / grid_hz;
    if (window.length_ns() < 0 || window.length_ns() % step != 0) {
        throw ConfigError("window length must be a whole number of grid steps");
    }
    if (raw.front().ts_ns > window.start_ns) {
        throw EmptyStream("stream " + std::string(metric_name(id)) +
                          " has no sample at or before the window start");
    }
    const std::size_t n = static_cast<std::size_t>(window.length_ns() / step);
    std::vector<double> out(n);
    std::size_t cursor = 0;  // last sample with ts <= grid point
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t t = window.start_ns + static_cast<std::int64_t>(i) * step;
        while (cursor + 1 < raw.size() && raw[cursor + 1].ts_ns <= t) ++cursor;
        if (t - raw[cursor].ts_ns > max_gap_ns) {
            throw GapTooLarge("stream " + std::string(metric_name(id)) +
                              " gap exceeds max_gap at grid point " +
                              std::to_string(t));
        }
        out[i] = raw[cursor].value;
    }
    return out;
}

AlignedFrame align(const SampleStreams& raw, TimeInterval window,
                   const AlignParams& params) {
    const auto target_it = raw.find(MetricId::NcclLatency);
    if (target_it == raw.end()) {
        throw EmptyStream("nccl_latency stream is required for alignment");
    }
    AlignedFrame frame;
    frame.grid_hz = params.grid_hz;
    frame.window_start = window.start_ns;
    frame.window_end = window.end_ns;

    auto make_series = [&](MetricId id, const std::vector<Sample>& samples) {
        MetricSeries s;
        s.id = id;
        s.grid_hz = params.grid_hz;
        s.start_ts = window.start_ns;
        s.values = hold_resample(samples, id, window, params.grid_hz,
                                 params.max_gap_ns);
        return s;
    };

    frame.target = make_series(MetricId::NcclLatency, target_it->second);
    for (const auto& [id, samples] : raw) {
        if (id == MetricId::NcclLatency) continue;
        frame.hosts.emplace(id, make_series(id, samples));
    }
    return frame;
}

}  // namespace tailrca
