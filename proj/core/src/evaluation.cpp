// SPDX-License-Identifier: Apache-2.0
#include "tailrca/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "tailrca/rng.hpp"

namespace tailrca {

namespace {

constexpr std::uint64_t kScenarioStreamSalt = 0x5C;

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (const char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(value));
    return buf;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string fixed1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

nlohmann::ordered_json config_json(const EvaluationConfig& config) {
    using json = nlohmann::ordered_json;
    json j;
    j["trials_per_category"] = config.trials_per_category;
    j["seed_base"] = config.seed_base;

    json engine;
    engine["grid_hz"] = config.engine.grid_hz;
    engine["max_gap_ns"] = config.engine.max_gap_ns;
    engine["threshold_sigma"] = config.engine.detection.threshold_sigma;
    engine["observation_window_s"] =
        config.engine.detection.observation_window_s;
    engine["baseline_window_s"] = config.engine.detection.baseline_window_s;
    engine["stride_ms"] = config.engine.detection.stride_ms;
    engine["sigma_floor"] = config.engine.detection.sigma_floor;
    engine["min_baseline_samples"] =
        config.engine.detection.min_baseline_samples;
    engine["max_lag"] = config.engine.rca.max_lag;
    engine["alpha"] = config.engine.rca.alpha;
    engine["spike_cap"] = config.engine.rca.spike_cap;
    engine["low_confidence"] = config.engine.rca.low_confidence;
    engine["analysis_budget_s"] = config.engine.rca.analysis_budget_s;
    json ablated = json::array();
    for (MetricId id : config.engine.ablated) {
        ablated.push_back(metric_name(id));
    }
    engine["ablated"] = std::move(ablated);
    j["engine"] = std::move(engine);

    json workload;
    workload["base_latency_us"] = config.workload.base_latency_us;
    workload["jitter_sigma_us"] = config.workload.jitter_sigma_us;
    workload["message_size_bytes"] = config.workload.message_size_bytes;
    workload["duration_s"] = config.workload.duration_s;
    workload["noise_clip_sigma"] = config.workload.noise_clip_sigma;
    workload["burst_rate_per_s"] = config.workload.background.rate_per_s;
    workload["burst_min_amp_sigma"] = config.workload.background.min_amp_sigma;
    workload["burst_max_amp_sigma"] = config.workload.background.max_amp_sigma;
    workload["burst_min_duration_s"] =
        config.workload.background.min_duration_s;
    workload["burst_max_duration_s"] =
        config.workload.background.max_duration_s;
    workload["burst_ramp_ms"] = config.workload.background.ramp_ms;
    j["workload"] = std::move(workload);

    json rand;
    rand["min_magnitude_sigma"] = config.randomization.min_magnitude_sigma;
    rand["max_magnitude_sigma"] = config.randomization.max_magnitude_sigma;
    rand["min_onset_s"] = config.randomization.min_onset_s;
    rand["max_onset_s"] = config.randomization.max_onset_s;
    rand["duration_s"] = config.randomization.duration_s;
    rand["ramp_ms"] = config.randomization.ramp_ms;
    rand["max_lag_ms"] = config.randomization.max_lag_ms;
    rand["modulation_depth"] = config.randomization.modulation_depth;
    j["randomization"] = std::move(rand);
    return j;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed_base, int category_index,
                         int trial_index) {
    return seed_base + static_cast<std::uint64_t>(category_index) * 10000 +
           static_cast<std::uint64_t>(trial_index);
}

Scenario make_trial_scenario(CauseCategory category, int trial_index,
                             const EvaluationConfig& config) {
    const std::uint64_t seed =
        trial_seed(config.seed_base, category_index(category), trial_index);
    Rng rng(derive_seed(seed, kScenarioStreamSalt));
    const TrialRandomization& r = config.randomization;

    Scenario scenario;
    scenario.workload = config.workload;
    scenario.workload.seed = seed;

    Disturbance d;
    d.kind = kind_for_category(category);
    d.magnitude_sigma = rng.uniform(r.min_magnitude_sigma, r.max_magnitude_sigma);
    // onset on the 10 ms sample grid, lag on the same grid
    d.onset_s =
        0.01 * static_cast<double>(rng.uniform_int(
                   static_cast<std::int64_t>(r.min_onset_s * 100),
                   static_cast<std::int64_t>(r.max_onset_s * 100)));
    d.latency_lag_ms = 10.0 * static_cast<double>(rng.uniform_int(
                                  0, static_cast<std::int64_t>(r.max_lag_ms / 10.0)));
    d.duration_s = r.duration_s;
    d.ramp_ms = r.ramp_ms;
    d.modulation_depth = r.modulation_depth;
    scenario.disturbance = d;
    return scenario;
}

std::string config_fingerprint(const EvaluationConfig& config) {
    return hex64(fnv1a64(config_json(config).dump()));
}

EvaluationResult run_evaluation(const EvaluationConfig& config) {
    const int trials = std::max(config.trials_per_category, 0);
    const auto& categories = all_categories();
    const std::size_t total = categories.size() * static_cast<std::size_t>(trials);

    EvaluationResult result;
    result.trials.resize(total);

    unsigned workers = config.workers > 0
                           ? static_cast<unsigned>(config.workers)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers,
                       static_cast<unsigned>(total == 0 ? 1 : total));

    // category-major flat index; results land by index so the reduction is
    // independent of scheduling
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            const auto c = categories[i / static_cast<std::size_t>(trials)];
            const int t = static_cast<int>(i % static_cast<std::size_t>(trials));
            result.trials[i] =
                run_trial(make_trial_scenario(c, t, config), config.engine);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    EvaluationReport& report = result.report;
    report.total_trials = static_cast<int>(total);
    double accuracy_sum = 0.0;
    for (std::size_t ci = 0; ci < categories.size(); ++ci) {
        CategoryStats& stats = report.per_category[ci];
        stats.category = categories[ci];
        stats.trials = trials;
        std::vector<double> rca_times;
        for (int t = 0; t < trials; ++t) {
            const TrialResult& trial =
                result.trials[ci * static_cast<std::size_t>(trials) +
                              static_cast<std::size_t>(t)];
            if (!trial.detected || !trial.predicted) {
                ++stats.missed;
                continue;
            }
            ++stats.classified;
            ++stats.predicted_counts[static_cast<std::size_t>(
                category_index(*trial.predicted))];
            if (trial.correct) ++stats.correct;
            rca_times.push_back(trial.time_to_rca_s);
        }
        stats.accuracy_pct =
            stats.classified > 0
                ? 100.0 * stats.correct / static_cast<double>(stats.classified)
                : 0.0;
        stats.median_time_to_rca_s = median(std::move(rca_times));
        accuracy_sum += stats.accuracy_pct;
        report.total_missed += stats.missed;
        for (std::size_t pj = 0; pj < categories.size(); ++pj) {
            report.confusion_pct[ci][pj] =
                stats.classified > 0
                    ? 100.0 * stats.predicted_counts[pj] /
                          static_cast<double>(stats.classified)
                    : 0.0;
        }
    }
    report.mean_accuracy_pct =
        accuracy_sum / static_cast<double>(categories.size());
    report.config_fingerprint = config_fingerprint(config);
    return result;
}

std::string render_report_table(const EvaluationReport& report) {
    std::ostringstream out;
    out << "category  trials  classified  missed  accuracy%  median_rca_s\n";
    for (const CategoryStats& s : report.per_category) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-8s  %6d  %10d  %6d  %9s  %12s\n",
                      std::string(category_name(s.category)).c_str(), s.trials,
                      s.classified, s.missed, fixed1(s.accuracy_pct).c_str(),
                      fixed2(s.median_time_to_rca_s).c_str());
        out << line;
    }
    out << "mean accuracy: " << fixed1(report.mean_accuracy_pct) << "%  ("
        << report.total_trials << " trials, " << report.total_missed
        << " missed)\n";
    out << "config fingerprint: " << report.config_fingerprint << "\n\n";
    out << "confusion matrix (row-normalized %, rows injected, cols predicted)\n";
    out << "          IO      CPU     NIC     GPU\n";
    for (std::size_t ci = 0; ci < report.per_category.size(); ++ci) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-8s  %6s  %6s  %6s  %6s\n",
                      std::string(category_name(
                          report.per_category[ci].category)).c_str(),
                      fixed1(report.confusion_pct[ci][0]).c_str(),
                      fixed1(report.confusion_pct[ci][1]).c_str(),
                      fixed1(report.confusion_pct[ci][2]).c_str(),
                      fixed1(report.confusion_pct[ci][3]).c_str());
        out << line;
    }
    return out.str();
}

std::string render_report_record(const EvaluationReport& report) {
    using json = nlohmann::ordered_json;
    json j;
    j["schema"] = "tailrca.evaluation.v1";
    j["config_fingerprint"] = report.config_fingerprint;
    j["mean_accuracy_pct"] = report.mean_accuracy_pct;
    j["total_trials"] = report.total_trials;
    j["total_missed"] = report.total_missed;
    json categories = json::array();
    for (const CategoryStats& s : report.per_category) {
        json entry;
        entry["category"] = category_name(s.category);
        entry["trials"] = s.trials;
        entry["classified"] = s.classified;
        entry["missed"] = s.missed;
        entry["correct"] = s.correct;
        entry["accuracy_pct"] = s.accuracy_pct;
        entry["median_time_to_rca_s"] = s.median_time_to_rca_s;
        categories.push_back(std::move(entry));
    }
    j["per_category"] = std::move(categories);
    json confusion = json::array();
    for (const auto& row : report.confusion_pct) {
        confusion.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["confusion_pct"] = std::move(confusion);
    return j.dump();
}

}  // namespace tailrca
