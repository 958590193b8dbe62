// SPDX-License-Identifier: Apache-2.0
//
// tailrca CLI: scenario simulation, trace diagnosis, batch evaluation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tailrca/config.hpp"
#include "tailrca/engine.hpp"
#include "tailrca/evaluation.hpp"
#include "tailrca/simulator.hpp"
#include "tailrca/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitInsufficientData = 3;

struct CommonOpts {
    std::string config_path;
    std::optional<std::int64_t> seed;
    std::string out_path;
    std::string format = "table";
    int workers = 0;
};

tailrca::CliConfig load(const CommonOpts& opts) {
    auto config = opts.config_path.empty()
                      ? tailrca::default_config()
                      : tailrca::load_config(opts.config_path);
    if (opts.seed) {
        config.scenario.workload.seed = static_cast<std::uint64_t>(*opts.seed);
        config.evaluation.seed_base = static_cast<std::uint64_t>(*opts.seed);
        config.evaluation.workload.seed =
            static_cast<std::uint64_t>(*opts.seed);
    }
    if (opts.workers > 0) config.evaluation.workers = opts.workers;
    return config;
}

std::string seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", s);
    return buf;
}

void print_diagnosis(const tailrca::Diagnosis& d) {
    using namespace tailrca;
    std::printf("spike: score=%.2f sigma, window=[%ss, %ss), onset=%ss, detected=%ss\n",
                d.spike.score,
                seconds(static_cast<double>(d.spike.window.start_ns) / 1e9).c_str(),
                seconds(static_cast<double>(d.spike.window.end_ns) / 1e9).c_str(),
                seconds(static_cast<double>(d.onset_ts) / 1e9).c_str(),
                seconds(static_cast<double>(d.detected_ts) / 1e9).c_str());
    std::printf("top cause: %s (confidence %.3f), time-to-RCA %.2f s%s\n",
                std::string(category_name(d.top_cause)).c_str(),
                d.ranking.front().confidence, d.time_to_rca_s,
                d.low_confidence ? "  [warning: low confidence]" : "");
    std::printf("%-4s  %-8s  %s\n", "rank", "category", "confidence");
    for (std::size_t i = 0; i < d.ranking.size(); ++i) {
        std::printf("%4zu  %-8s  %10.3f\n", i + 1,
                    std::string(category_name(d.ranking[i].category)).c_str(),
                    d.ranking[i].confidence);
    }
    std::printf("evidence (negative lag: metric leads latency):\n");
    std::printf("%-18s  %6s  %6s  %8s  %6s\n", "metric", "spike", "corr",
                "lag_ms", "conf");
    for (const Evidence& ev : d.evidence) {
        std::printf("%-18s  %6.3f  %6.3f  %8.1f  %6.3f%s\n",
                    std::string(metric_name(ev.metric)).c_str(),
                    ev.spike_score_norm, ev.correlation, ev.best_lag_ms,
                    ev.confidence, ev.degenerate ? "  (degenerate)" : "");
    }
}

int cmd_simulate(const CommonOpts& opts) {
    const auto config = load(opts);
    const auto series = tailrca::generate(config.scenario);
    const std::size_t count = tailrca::write_trace_file(series, opts.out_path);
    std::cout << "wrote " << count << " records to " << opts.out_path << "\n";
    return kExitOk;
}

int cmd_diagnose(const CommonOpts& opts, const std::string& trace_path,
                 const std::string& timeline_csv) {
    const auto config = load(opts);
    auto read = tailrca::read_trace_file(trace_path);
    if (read.skipped_unknown > 0) {
        std::cerr << "warning: skipped " << read.skipped_unknown
                  << " records with unknown metrics\n";
    }
    tailrca::ReplayCollector collector(std::move(read.streams));
    const tailrca::SampleStreams streams = tailrca::drain(collector);
    const tailrca::DiagnosisEngine engine(config.engine);
    const tailrca::RunResult result = engine.run(streams);

    if (!timeline_csv.empty()) {
        const auto& target = streams.at(tailrca::MetricId::NcclLatency);
        const std::int64_t step = 1'000'000'000LL / config.engine.grid_hz;
        const std::int64_t t0 = target.front().ts_ns;
        const std::int64_t t_end =
            t0 + ((target.back().ts_ns - t0) / step + 1) * step;
        tailrca::AlignParams ap;
        ap.grid_hz = config.engine.grid_hz;
        ap.max_gap_ns = config.engine.max_gap_ns;
        const auto frame = tailrca::align(streams, {t0, t_end}, ap);
        std::ofstream csv(timeline_csv);
        if (!csv) throw tailrca::Error("cannot open " + timeline_csv);
        tailrca::write_timeline_csv(frame, csv);
    }

    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path);
        if (!out) throw tailrca::Error("cannot open " + opts.out_path);
        for (const auto& d : result.diagnoses) {
            out << tailrca::diagnosis_record(d) << "\n";
        }
    }

    if (result.diagnoses.empty()) {
        std::cout << "no spike detected (" << result.evaluations
                  << " windows evaluated)\n";
        return kExitOk;
    }
    if (opts.format == "records") {
        for (const auto& d : result.diagnoses) {
            std::cout << tailrca::diagnosis_record(d) << "\n";
        }
    } else {
        for (const auto& d : result.diagnoses) print_diagnosis(d);
    }
    return kExitOk;
}

int cmd_evaluate(const CommonOpts& opts, std::optional<int> trials,
                 const std::vector<std::string>& ablate) {
    auto config = load(opts);
    if (trials) config.evaluation.trials_per_category = *trials;
    for (const std::string& name : ablate) {
        const auto id = tailrca::metric_from_name(name);
        if (!id) throw tailrca::ConfigError("unknown metric in --ablate: " + name);
        if (*id == tailrca::MetricId::NcclLatency) {
            throw tailrca::ConfigError("cannot ablate the target series");
        }
        config.evaluation.engine.ablated.insert(*id);
    }
    const tailrca::EvaluationResult result =
        tailrca::run_evaluation(config.evaluation);

    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path);
        if (!out) throw tailrca::Error("cannot open " + opts.out_path);
        out << tailrca::render_report_record(result.report) << "\n";
    }
    if (opts.format == "records") {
        std::cout << tailrca::render_report_record(result.report) << "\n";
    } else {
        std::cout << tailrca::render_report_table(result.report);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Root-cause analysis toolkit for GPU tail-latency spikes"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string trace_path;
    std::string timeline_csv;
    std::optional<int> trials;
    std::vector<std::string> ablate;

    auto add_common = [&](CLI::App* cmd, bool with_out_required = false) {
        cmd->add_option("--config", opts.config_path,
                        "JSON config (workload/disturbance/engine/evaluation)");
        cmd->add_option("--seed", opts.seed, "override workload seed / seed base");
        auto* out = cmd->add_option("--out", opts.out_path, "output path");
        if (with_out_required) out->required();
        cmd->add_option("--format", opts.format, "stdout format")
            ->check(CLI::IsMember({"table", "records"}));
        cmd->add_option("--workers", opts.workers, "parallel trial workers");
    };

    auto* simulate = app.add_subcommand(
        "simulate", "generate a labeled telemetry trace for a scenario");
    add_common(simulate, true);

    auto* diagnose = app.add_subcommand(
        "diagnose", "detect and diagnose spikes in a recorded trace");
    diagnose->add_option("trace", trace_path, "line-delimited trace file")
        ->required();
    diagnose->add_option("--timeline-csv", timeline_csv,
                         "write the aligned per-metric timeline as CSV");
    add_common(diagnose);

    auto* evaluate = app.add_subcommand(
        "evaluate", "run labeled trials and report accuracy / Time-to-RCA");
    evaluate->add_option("--trials", trials, "trials per category");
    evaluate->add_option("--ablate", ablate, "metrics to drop before diagnosis")
        ->delimiter(',');
    add_common(evaluate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (diagnose->parsed())
            return cmd_diagnose(opts, trace_path, timeline_csv);
        if (evaluate->parsed()) return cmd_evaluate(opts, trials, ablate);
    } catch (const tailrca::InsufficientBaseline& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const tailrca::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
