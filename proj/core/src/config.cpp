// SPDX-License-Identifier: Apache-2.0
#include "tailrca/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tailrca {

namespace {

using json = nlohmann::json;

double num_or(const json& j, const char* key, double fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) {
        throw ConfigError(std::string(key) + " must be a number");
    }
    return it->get<double>();
}

std::int64_t int_or(const json& j, const char* key, std::int64_t fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) {
        throw ConfigError(std::string(key) + " must be an integer");
    }
    return it->get<std::int64_t>();
}

void parse_workload(const json& block, WorkloadModel& w) {
    w.base_latency_us = num_or(block, "base_latency_us", w.base_latency_us);
    w.jitter_sigma_us = num_or(block, "jitter_sigma_us", w.jitter_sigma_us);
    w.message_size_bytes =
        int_or(block, "message_size_bytes", w.message_size_bytes);
    w.duration_s = num_or(block, "duration_s", w.duration_s);
    w.seed = static_cast<std::uint64_t>(
        int_or(block, "seed", static_cast<std::int64_t>(w.seed)));
    w.noise_clip_sigma = num_or(block, "noise_clip_sigma", w.noise_clip_sigma);
    const auto bg = block.find("background");
    if (bg != block.end()) {
        if (!bg->is_object()) throw ConfigError("background must be an object");
        BackgroundBurstModel& b = w.background;
        b.rate_per_s = num_or(*bg, "rate_per_s", b.rate_per_s);
        b.min_amp_sigma = num_or(*bg, "min_amp_sigma", b.min_amp_sigma);
        b.max_amp_sigma = num_or(*bg, "max_amp_sigma", b.max_amp_sigma);
        b.min_duration_s = num_or(*bg, "min_duration_s", b.min_duration_s);
        b.max_duration_s = num_or(*bg, "max_duration_s", b.max_duration_s);
        b.ramp_ms = num_or(*bg, "ramp_ms", b.ramp_ms);
    }
}

Disturbance parse_disturbance(const json& block) {
    Disturbance d;
    const auto kind_it = block.find("kind");
    if (kind_it == block.end() || !kind_it->is_string()) {
        throw ConfigError("disturbance.kind is required");
    }
    const auto kind = kind_from_name(kind_it->get<std::string>());
    if (!kind) {
        throw ConfigError("unknown disturbance kind " +
                          kind_it->get<std::string>());
    }
    d.kind = *kind;
    d.onset_s = num_or(block, "onset_s", d.onset_s);
    d.duration_s = num_or(block, "duration_s", d.duration_s);
    d.magnitude_sigma = num_or(block, "magnitude_sigma", d.magnitude_sigma);
    d.latency_lag_ms = num_or(block, "latency_lag_ms", d.latency_lag_ms);
    d.ramp_ms = num_or(block, "ramp_ms", d.ramp_ms);
    d.modulation_depth = num_or(block, "modulation_depth", d.modulation_depth);
    const auto coupling_it = block.find("coupling");
    if (coupling_it != block.end()) {
        if (!coupling_it->is_object()) {
            throw ConfigError("coupling must be an object");
        }
        Coupling c = default_coupling(d.kind);
        c.latency_gain = num_or(*coupling_it, "latency_gain", c.latency_gain);
        const auto gains = coupling_it->find("metric_gain");
        if (gains != coupling_it->end()) {
            if (!gains->is_object()) {
                throw ConfigError("metric_gain must be an object");
            }
            c.metric_gain.clear();
            for (const auto& [name, value] : gains->items()) {
                const auto id = metric_from_name(name);
                if (!id || *id == MetricId::NcclLatency) {
                    throw ConfigError("bad metric in coupling: " + name);
                }
                if (!value.is_number()) {
                    throw ConfigError("coupling gain for " + name +
                                      " must be a number");
                }
                c.metric_gain[*id] = value.get<double>();
            }
        }
        d.coupling = c;
    }
    return d;
}

void parse_engine(const json& block, EngineParams& e) {
    e.grid_hz = static_cast<int>(int_or(block, "grid_hz", e.grid_hz));
    e.max_gap_ns = static_cast<std::int64_t>(
        num_or(block, "max_gap_s",
               static_cast<double>(e.max_gap_ns) / 1e9) * 1e9);
    DetectionParams& d = e.detection;
    d.threshold_sigma = num_or(block, "threshold_sigma", d.threshold_sigma);
    d.observation_window_s =
        num_or(block, "observation_window_s", d.observation_window_s);
    d.baseline_window_s =
        num_or(block, "baseline_window_s", d.baseline_window_s);
    d.stride_ms = num_or(block, "stride_ms", d.stride_ms);
    d.sigma_floor = num_or(block, "sigma_floor", d.sigma_floor);
    d.min_baseline_samples = static_cast<int>(
        int_or(block, "min_baseline_samples", d.min_baseline_samples));
    RcaParams& r = e.rca;
    r.max_lag = static_cast<int>(int_or(block, "max_lag", r.max_lag));
    r.alpha = num_or(block, "alpha", r.alpha);
    r.spike_cap = num_or(block, "spike_cap", r.spike_cap);
    r.low_confidence = num_or(block, "low_confidence", r.low_confidence);
    r.analysis_budget_s =
        num_or(block, "analysis_budget_s", r.analysis_budget_s);
    r.threshold_sigma = d.threshold_sigma;
    const auto ablated = block.find("ablated");
    if (ablated != block.end()) {
        if (!ablated->is_array()) throw ConfigError("ablated must be an array");
        for (const auto& entry : *ablated) {
            if (!entry.is_string()) {
                throw ConfigError("ablated entries must be metric names");
            }
            const auto id = metric_from_name(entry.get<std::string>());
            if (!id) {
                throw ConfigError("unknown metric in ablated: " +
                                  entry.get<std::string>());
            }
            if (*id == MetricId::NcclLatency) {
                throw ConfigError("cannot ablate the target series");
            }
            e.ablated.insert(*id);
        }
    }
}

void parse_evaluation(const json& block, EvaluationConfig& ev) {
    ev.trials_per_category = static_cast<int>(
        int_or(block, "trials_per_category", ev.trials_per_category));
    ev.seed_base = static_cast<std::uint64_t>(
        int_or(block, "seed_base", static_cast<std::int64_t>(ev.seed_base)));
    ev.workers = static_cast<int>(int_or(block, "workers", ev.workers));
    const auto rand = block.find("randomization");
    if (rand != block.end()) {
        if (!rand->is_object()) {
            throw ConfigError("randomization must be an object");
        }
        TrialRandomization& r = ev.randomization;
        r.min_magnitude_sigma =
            num_or(*rand, "min_magnitude_sigma", r.min_magnitude_sigma);
        r.max_magnitude_sigma =
            num_or(*rand, "max_magnitude_sigma", r.max_magnitude_sigma);
        r.min_onset_s = num_or(*rand, "min_onset_s", r.min_onset_s);
        r.max_onset_s = num_or(*rand, "max_onset_s", r.max_onset_s);
        r.duration_s = num_or(*rand, "duration_s", r.duration_s);
        r.ramp_ms = num_or(*rand, "ramp_ms", r.ramp_ms);
        r.max_lag_ms = num_or(*rand, "max_lag_ms", r.max_lag_ms);
        r.modulation_depth =
            num_or(*rand, "modulation_depth", r.modulation_depth);
    }
}

}  // namespace

CliConfig default_config() {
    CliConfig config;
    config.evaluation.engine = config.engine;
    config.evaluation.workload = config.scenario.workload;
    return config;
}

CliConfig parse_config(const std::string& json_text) {
    const json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError("config is not a JSON object");
    }
    CliConfig config;
    const auto workload = doc.find("workload");
    if (workload != doc.end()) {
        if (!workload->is_object()) {
            throw ConfigError("workload must be an object");
        }
        parse_workload(*workload, config.scenario.workload);
    }
    const auto disturbance = doc.find("disturbance");
    if (disturbance != doc.end() && !disturbance->is_null()) {
        if (!disturbance->is_object()) {
            throw ConfigError("disturbance must be an object");
        }
        config.scenario.disturbance = parse_disturbance(*disturbance);
    }
    const auto engine = doc.find("engine");
    if (engine != doc.end()) {
        if (!engine->is_object()) throw ConfigError("engine must be an object");
        parse_engine(*engine, config.engine);
    }
    config.evaluation.engine = config.engine;
    config.evaluation.workload = config.scenario.workload;
    const auto evaluation = doc.find("evaluation");
    if (evaluation != doc.end()) {
        if (!evaluation->is_object()) {
            throw ConfigError("evaluation must be an object");
        }
        parse_evaluation(*evaluation, config.evaluation);
    }
    return config;
}

CliConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace tailrca
