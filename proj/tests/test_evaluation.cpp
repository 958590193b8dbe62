// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "tailrca/evaluation.hpp"

using namespace tailrca;

namespace {

EvaluationConfig small_config(int trials, std::uint64_t seed_base = 1) {
    EvaluationConfig config;
    config.trials_per_category = trials;
    config.seed_base = seed_base;
    config.workers = 2;
    return config;
}

}  // namespace

TEST_CASE("trial seeds derive as base + category*10000 + index") {
    CHECK(trial_seed(1, 0, 0) == 1);
    CHECK(trial_seed(1, 2, 5) == 20006);
    CHECK(trial_seed(100, 3, 16) == 30116);
}

TEST_CASE("one strong trial per category gives a fully diagonal matrix") {
    EvaluationConfig config = small_config(1);
    config.randomization.min_magnitude_sigma = 8.0;
    config.randomization.max_magnitude_sigma = 8.0;
    config.workload.background.rate_per_s = 0.0;

    const EvaluationResult result = run_evaluation(config);
    CHECK(result.report.total_trials == 4);
    CHECK(result.report.total_missed == 0);
    for (std::size_t ci = 0; ci < 4; ++ci) {
        CHECK(result.report.per_category[ci].accuracy_pct == 100.0);
        CHECK(result.report.confusion_pct[ci][ci] == 100.0);
    }
    CHECK(result.report.mean_accuracy_pct == 100.0);
}

TEST_CASE("confusion rows sum to 100 and trial accounting is exact") {
    const EvaluationResult result = run_evaluation(small_config(8));
    for (std::size_t ci = 0; ci < 4; ++ci) {
        const CategoryStats& stats = result.report.per_category[ci];
        CHECK(stats.classified + stats.missed == stats.trials);
        if (stats.classified > 0) {
            double row = 0.0;
            for (double cell : result.report.confusion_pct[ci]) row += cell;
            CHECK(std::abs(row - 100.0) <= 0.1);
        }
    }
    CHECK(result.trials.size() == 32);
}

TEST_CASE("an impossible threshold turns every trial into a reported miss") {
    EvaluationConfig config = small_config(2);
    config.engine.detection.threshold_sigma = 50.0;
    const EvaluationResult result = run_evaluation(config);
    CHECK(result.report.total_missed == 8);
    for (std::size_t ci = 0; ci < 4; ++ci) {
        CHECK(result.report.per_category[ci].classified == 0);
        CHECK(result.report.per_category[ci].accuracy_pct == 0.0);
    }
}

TEST_CASE("reports are byte-reproducible and fingerprints track the config") {
    const EvaluationConfig config = small_config(4);
    const EvaluationResult a = run_evaluation(config);
    const EvaluationResult b = run_evaluation(config);
    CHECK(render_report_table(a.report) == render_report_table(b.report));
    CHECK(render_report_record(a.report) == render_report_record(b.report));
    CHECK(a.report.config_fingerprint == b.report.config_fingerprint);

    EvaluationConfig other = config;
    other.seed_base = 2;
    CHECK(config_fingerprint(other) != a.report.config_fingerprint);

    EvaluationConfig more_workers = config;
    more_workers.workers = 7;  // scheduling must not leak into the bytes
    const EvaluationResult c = run_evaluation(more_workers);
    CHECK(render_report_record(c.report) == render_report_record(a.report));
}

TEST_CASE("any single trial is re-runnable in isolation") {
    const EvaluationConfig config = small_config(3);
    const EvaluationResult batch = run_evaluation(config);

    const auto scenario = make_trial_scenario(CauseCategory::NIC, 1, config);
    const TrialResult alone = run_trial(scenario, config.engine);
    const TrialResult& from_batch = batch.trials[2 * 3 + 1];

    CHECK(alone.detected == from_batch.detected);
    CHECK(alone.predicted == from_batch.predicted);
    CHECK(alone.correct == from_batch.correct);
    CHECK(alone.time_to_rca_s == from_batch.time_to_rca_s);
}

TEST_CASE("trial scenarios stay inside the randomization ranges") {
    const EvaluationConfig config = small_config(20);
    for (CauseCategory c : all_categories()) {
        for (int t = 0; t < 20; ++t) {
            const Scenario s = make_trial_scenario(c, t, config);
            REQUIRE(s.disturbance.has_value());
            const Disturbance& d = *s.disturbance;
            CHECK(d.kind == kind_for_category(c));
            CHECK(d.magnitude_sigma >= config.randomization.min_magnitude_sigma);
            CHECK(d.magnitude_sigma <= config.randomization.max_magnitude_sigma);
            CHECK(d.onset_s >= config.randomization.min_onset_s);
            CHECK(d.onset_s <= config.randomization.max_onset_s);
            CHECK(d.latency_lag_ms >= 0.0);
            CHECK(d.latency_lag_ms <= config.randomization.max_lag_ms);
            // lag sits on the 10 ms grid
            CHECK(std::fmod(d.latency_lag_ms, 10.0) == 0.0);
        }
    }
}
