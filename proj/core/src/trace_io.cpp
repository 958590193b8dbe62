// SPDX-License-Identifier: Apache-2.0
#include "tailrca/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "json.hpp"

namespace tailrca {

namespace {

void append_double(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

void append_int(std::string& out, std::int64_t value) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

std::string format_record(std::int64_t ts_ns, std::string_view metric,
                          double value) {
    std::string line;
    line.reserve(64);
    line += "{\"ts_ns\":";
    append_int(line, ts_ns);
    line += ",\"metric\":\"";
    line += metric;
    line += "\",\"value\":";
    append_double(line, value);
    line += "}\n";
    return line;
}

}  // namespace

void write_record(std::ostream& out, std::int64_t ts_ns,
                  std::string_view metric, double value) {
    out << format_record(ts_ns, metric, value);
}

std::size_t write_trace(const SampleStreams& streams, std::ostream& out) {
    // k-way merge in timestamp order; ties resolve in metric declaration
    // order because SampleStreams is keyed by MetricId.
    struct Cursor {
        MetricId id;
        const std::vector<Sample>* samples;
        std::size_t pos = 0;
    };
    std::vector<Cursor> cursors;
    for (const auto& [id, samples] : streams) {
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (samples[i].ts_ns <= samples[i - 1].ts_ns) {
                throw WriteOrderError(
                    "samples for " + std::string(metric_name(id)) +
                    " are not strictly increasing in ts_ns");
            }
        }
        if (!samples.empty()) cursors.push_back({id, &samples});
    }
    std::size_t count = 0;
    for (;;) {
        Cursor* best = nullptr;
        for (Cursor& c : cursors) {
            if (c.pos >= c.samples->size()) continue;
            if (!best || (*c.samples)[c.pos].ts_ns <
                             (*best->samples)[best->pos].ts_ns) {
                best = &c;
            }
        }
        if (!best) break;
        const Sample& s = (*best->samples)[best->pos++];
        write_record(out, s.ts_ns, metric_name(best->id), s.value);
        ++count;
    }
    return count;
}

std::size_t write_trace(const std::map<MetricId, MetricSeries>& series,
                        std::ostream& out) {
    SampleStreams streams;
    for (const auto& [id, s] : series) streams.emplace(id, s.to_samples());
    return write_trace(streams, out);
}

std::size_t write_trace_file(const std::map<MetricId, MetricSeries>& series,
                             const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return write_trace(series, out);
}

std::optional<TraceRecord> TraceReader::next() {
    std::string line;
    if (!std::getline(*in_, line)) return std::nullopt;
    ++line_no_;

    const auto parsed = nlohmann::json::parse(line, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw MalformedRecord("unparsable trace record", line_no_);
    }
    const auto ts_it = parsed.find("ts_ns");
    const auto metric_it = parsed.find("metric");
    const auto value_it = parsed.find("value");
    if (ts_it == parsed.end() || !ts_it->is_number_integer() ||
        metric_it == parsed.end() || !metric_it->is_string() ||
        value_it == parsed.end() || !value_it->is_number()) {
        throw MalformedRecord("missing or mistyped record field", line_no_);
    }
    TraceRecord record;
    record.ts_ns = ts_it->get<std::int64_t>();
    record.metric = metric_it->get<std::string>();
    record.value = value_it->get<double>();
    if (!std::isfinite(record.value)) {
        throw MalformedRecord("non-finite value", line_no_);
    }

    const auto last = last_ts_.find(record.metric);
    if (last != last_ts_.end() && record.ts_ns <= last->second) {
        throw OrderViolation("timestamp regression for metric " +
                             record.metric + " at line " +
                             std::to_string(line_no_));
    }
    last_ts_[record.metric] = record.ts_ns;
    return record;
}

ReadResult read_trace(std::istream& in) {
    TraceReader reader(in);
    ReadResult result;
    while (auto record = reader.next()) {
        ++result.records;
        const auto id = metric_from_name(record->metric);
        if (!id) {
            ++result.skipped_unknown;
            continue;
        }
        result.streams[*id].push_back({record->ts_ns, record->value});
    }
    return result;
}

ReadResult read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string() + " for reading");
    return read_trace(in);
}

ReplayCollector::ReplayCollector(SampleStreams streams, double speed)
    : streams_(std::move(streams)), speed_(speed) {
    epoch_ts_ = 0;
    bool first = true;
    for (const auto& [id, samples] : streams_) {
        cursor_[id] = 0;
        int rate = 0;
        if (samples.size() >= 2) {
            const std::int64_t delta = samples[1].ts_ns - samples[0].ts_ns;
            if (delta > 0) rate = static_cast<int>(1'000'000'000LL / delta);
        }
        rate_[id] = rate;
        if (!samples.empty() &&
            (first || samples.front().ts_ns < epoch_ts_)) {
            epoch_ts_ = samples.front().ts_ns;
            first = false;
        }
    }
}

std::vector<MetricId> ReplayCollector::provides() const {
    std::vector<MetricId> out;
    for (const auto& [id, samples] : streams_) out.push_back(id);
    return out;
}

int ReplayCollector::native_rate_hz(MetricId id) const {
    const auto it = rate_.find(id);
    return it == rate_.end() ? 0 : it->second;
}

std::vector<Sample> ReplayCollector::next_batch(MetricId id) {
    const auto stream_it = streams_.find(id);
    if (stream_it == streams_.end()) return {};
    const std::vector<Sample>& samples = stream_it->second;
    std::size_t& pos = cursor_[id];
    if (pos >= samples.size()) return {};

    std::int64_t allowed;
    if (speed_ <= 0.0) {
        allowed = samples[pos].ts_ns + batch_span_ns_;
    } else {
        using clock = std::chrono::steady_clock;
        if (!started_) {
            wall_epoch_ = clock::now();
            started_ = true;
        }
        const std::int64_t due_ns = static_cast<std::int64_t>(
            static_cast<double>(samples[pos].ts_ns - epoch_ts_) / speed_);
        const auto due = wall_epoch_ + std::chrono::nanoseconds(due_ns);
        if (clock::now() < due) std::this_thread::sleep_until(due);
        const auto elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
            clock::now() - wall_epoch_).count();
        allowed = epoch_ts_ +
                  static_cast<std::int64_t>(static_cast<double>(elapsed) * speed_);
        allowed = std::max(allowed, samples[pos].ts_ns);
    }

    std::vector<Sample> batch;
    while (pos < samples.size() && samples[pos].ts_ns <= allowed) {
        batch.push_back(samples[pos++]);
    }
    return batch;
}

SampleStreams drain(CollectorEndpoint& collector) {
    SampleStreams out;
    const std::vector<MetricId> metrics = collector.provides();
    for (;;) {
        std::size_t pulled = 0;
        for (MetricId id : metrics) {
            std::vector<Sample> batch = collector.next_batch(id);
            pulled += batch.size();
            auto& stream = out[id];
            stream.insert(stream.end(), batch.begin(), batch.end());
        }
        if (pulled == 0) break;
    }
    return out;
}

std::string diagnosis_record(const Diagnosis& diagnosis) {
    using json = nlohmann::ordered_json;
    json record;
    record["schema"] = "tailrca.diagnosis.v1";
    record["detected_ts_ns"] = diagnosis.detected_ts;
    record["onset_ts_ns"] = diagnosis.onset_ts;
    record["rca_ts_ns"] = diagnosis.rca_ts;
    record["time_to_rca_s"] = diagnosis.time_to_rca_s;
    record["top_cause"] = category_name(diagnosis.top_cause);
    record["low_confidence"] = diagnosis.low_confidence;

    json spike;
    spike["metric"] = metric_name(diagnosis.spike.metric);
    spike["score"] = diagnosis.spike.score;
    spike["peak_ts_ns"] = diagnosis.spike.peak_ts;
    if (diagnosis.spike.onset_ts) {
        spike["onset_ts_ns"] = *diagnosis.spike.onset_ts;
    } else {
        spike["onset_ts_ns"] = nullptr;
    }
    spike["window_start_ns"] = diagnosis.spike.window.start_ns;
    spike["window_end_ns"] = diagnosis.spike.window.end_ns;
    spike["is_spike"] = diagnosis.spike.is_spike;
    record["spike"] = std::move(spike);

    json ranking = json::array();
    for (const CategoryScore& score : diagnosis.ranking) {
        json entry;
        entry["category"] = category_name(score.category);
        entry["confidence"] = score.confidence;
        ranking.push_back(std::move(entry));
    }
    record["ranking"] = std::move(ranking);

    json evidence = json::array();
    for (const Evidence& ev : diagnosis.evidence) {
        json entry;
        entry["metric"] = metric_name(ev.metric);
        entry["spike_score_norm"] = ev.spike_score_norm;
        entry["correlation"] = ev.correlation;
        entry["confidence"] = ev.confidence;
        entry["best_lag_samples"] = ev.best_lag_samples;
        entry["best_lag_ms"] = ev.best_lag_ms;
        entry["degenerate"] = ev.degenerate;
        evidence.push_back(std::move(entry));
    }
    record["evidence"] = std::move(evidence);
    return record.dump();
}

void write_timeline_csv(const AlignedFrame& frame, std::ostream& out) {
    std::string header = "ts_s,";
    header += metric_name(MetricId::NcclLatency);
    for (const auto& [id, series] : frame.hosts) {
        header += ',';
        header += metric_name(id);
    }
    out << header << '\n';
    for (std::size_t i = 0; i < frame.length(); ++i) {
        std::string row;
        append_double(row, static_cast<double>(frame.target.ts_at(i)) / 1e9);
        row += ',';
        append_double(row, frame.target.values[i]);
        for (const auto& [id, series] : frame.hosts) {
            row += ',';
            append_double(row, series.values[i]);
        }
        out << row << '\n';
    }
}

}  // namespace tailrca
