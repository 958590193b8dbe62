// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tailrca/correlation_rca.hpp"
#include "tailrca/telemetry_model.hpp"

namespace tailrca {

/// One persisted telemetry sample. Line format, fixed key order:
///   {"ts_ns":<int>,"metric":"<name>","value":<shortest-round-trip float>}
struct TraceRecord {
    std::int64_t ts_ns = 0;
    std::string metric;
    double value = 0.0;
};

/// Appends one record line (newline-terminated). Byte-deterministic: floats
/// render via the shortest decimal that round-trips exactly.
void write_record(std::ostream& out, std::int64_t ts_ns,
                  std::string_view metric, double value);

/// Writes streams interleaved in global timestamp order (ties in metric
/// declaration order). Returns the record count. Throws WriteOrderError on
/// unordered input.
std::size_t write_trace(const SampleStreams& streams, std::ostream& out);
std::size_t write_trace(const std::map<MetricId, MetricSeries>& series,
                        std::ostream& out);
std::size_t write_trace_file(const std::map<MetricId, MetricSeries>& series,
                             const std::filesystem::path& path);

/// Streaming line-at-a-time reader; memory stays bounded by the line length.
class TraceReader {
   public:
    explicit TraceReader(std::istream& in) : in_(&in) {}

    /// Next record, or nullopt at end of input. Throws MalformedRecord (with
    /// line number) and OrderViolation on per-metric timestamp regression.
    std::optional<TraceRecord> next();

    std::size_t line_no() const { return line_no_; }

   private:
    std::istream* in_;
    std::size_t line_no_ = 0;
    std::map<std::string, std::int64_t, std::less<>> last_ts_;
};

struct ReadResult {
    SampleStreams streams;
    std::size_t records = 0;
    std::size_t skipped_unknown = 0;  // unknown metric names, counted not fatal
};

/// Reads a whole trace, demultiplexed per metric in input order.
ReadResult read_trace(std::istream& in);
ReadResult read_trace_file(const std::filesystem::path& path);

/// Pull-based collector abstraction decoupling the engine from probe
/// implementations. Per metric, successive next_batch calls return strictly
/// increasing timestamps; an empty batch for every metric means exhausted.
class CollectorEndpoint {
   public:
    virtual ~CollectorEndpoint() = default;
    virtual std::vector<MetricId> provides() const = 0;
    virtual int native_rate_hz(MetricId id) const = 0;
    virtual std::vector<Sample> next_batch(MetricId id) = 0;
};

/// Presents recorded streams through the collector contract.
///
/// speed <= 0 replays as fast as possible on the simulated clock (no
/// sleeping); speed > 0 paces batch delivery at that multiple of recorded
/// time. Timestamps are always replayed faithfully.
class ReplayCollector : public CollectorEndpoint {
   public:
    ReplayCollector(SampleStreams streams, double speed = 0.0);

    std::vector<MetricId> provides() const override;
    int native_rate_hz(MetricId id) const override;
    std::vector<Sample> next_batch(MetricId id) override;

   private:
    SampleStreams streams_;
    std::map<MetricId, std::size_t> cursor_;
    std::map<MetricId, int> rate_;
    double speed_;
    std::int64_t batch_span_ns_ = 100'000'000;  // 100 ms of recorded time
    std::int64_t epoch_ts_ = 0;
    std::chrono::steady_clock::time_point wall_epoch_;
    bool started_ = false;
};

/// Drains a collector into per-metric sample streams.
SampleStreams drain(CollectorEndpoint& collector);

/// Serializes a diagnosis as one machine-readable record line with fixed key
/// order (schema tailrca.diagnosis.v1).
std::string diagnosis_record(const Diagnosis& diagnosis);

/// Writes an aligned frame as CSV: ts_s column plus one column per metric.
void write_timeline_csv(const AlignedFrame& frame, std::ostream& out);

}  // namespace tailrca
