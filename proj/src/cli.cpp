#include "epicast/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "epicast/config.hpp"
#include "epicast/dataset.hpp"
#include "epicast/error.hpp"
#include "epicast/evidence.hpp"
#include "epicast/metrics.hpp"
#include "epicast/mock_generators.hpp"
#include "epicast/report.hpp"
#include "epicast/retrieval.hpp"
#include "epicast/rolling.hpp"
#include "epicast/series.hpp"
#include "epicast/transcripts.hpp"

namespace epicast::cli {

using nlohmann::json;

namespace {

class Logger {
public:
    explicit Logger(std::ostream& err) : err_(err) {}

    void log(const std::string& level, const std::string& event, json fields = json::object()) {
        fields["ts"] = utc_timestamp();
        fields["level"] = level;
        fields["event"] = event;
        err_ << fields.dump() << '\n';
    }

private:
    std::ostream& err_;
};

struct Options {
    std::string config_path;
    std::string transcripts_dir;
    std::string mode;
    std::string p90_scope;
    int concurrency = 0;
    std::string run_id;
    std::string out_dir;

    std::string origin;
    std::string start;
    std::string end;
    int every_n = 0;
    std::string flags;
    std::string format = "json";
    std::string records_path;
    std::string output_path;
};

RunConfig resolve_config(const Options& o) {
    if (o.config_path.empty()) throw ValidationError("--config is required");
    RunConfig c = load_config(o.config_path);
    if (!o.p90_scope.empty()) c.ablation.p90_scope = parse_p90_scope(o.p90_scope);
    if (o.concurrency > 0) c.concurrency = o.concurrency;
    if (!o.run_id.empty()) c.run_id = o.run_id;
    if (!o.out_dir.empty()) c.output_dir = o.out_dir;
    c.validate();
    return c;
}

struct Providers {
    std::shared_ptr<LlmProvider> interpreter;
    std::shared_ptr<LlmProvider> forecaster;
};

Providers make_providers(const RunConfig& c, const Options& o, Logger& log) {
    std::string mode = o.mode.empty() ? (o.transcripts_dir.empty() ? "live" : "record") : o.mode;
    if (mode != "live" && mode != "record" && mode != "replay") {
        throw ValidationError("--mode must be record, replay or live");
    }
    if (mode != "live" && o.transcripts_dir.empty()) {
        throw ValidationError("--mode " + mode + " needs --transcripts DIR");
    }
    auto build = [&](const LlmProviderConfig& pc, AgentRole role) -> std::shared_ptr<LlmProvider> {
        const std::string agent = to_string(role);
        if (mode == "replay") {
            auto ts = load_transcripts_for(o.transcripts_dir, agent, c.run_id);
            if (ts.empty()) {
                throw ValidationError("no " + agent + " transcripts for run '" + c.run_id + "' in " +
                                      o.transcripts_dir);
            }
            return std::make_shared<ReplayProvider>(ts);
        }
        if (pc.provider_id == ProviderKind::replay) {
            throw ValidationError("provider 'replay' needs --mode replay --transcripts DIR");
        }
        auto inner = make_provider(pc, role);
        if (mode == "live") return inner;
        const auto path = (std::filesystem::path(o.transcripts_dir) /
                           transcript_filename(agent, inner->id(), c.run_id)).string();
        std::filesystem::remove(path);
        return std::make_shared<RecordingProvider>(inner, std::make_shared<TranscriptStore>(path));
    };
    Providers p{build(c.interpreter, AgentRole::interpreter), build(c.forecaster, AgentRole::forecaster)};
    log.log("info", "providers",
            {{"mode", mode}, {"interpreter", p.interpreter->id()}, {"forecaster", p.forecaster->id()}});
    return p;
}

RollingOptions rolling_options(const RunConfig& c, Logger& log) {
    RollingOptions opt;
    opt.horizon = c.constants.horizon;
    opt.recent_window = c.constants.recent_window;
    opt.volatility_bounds = c.constants.volatility_bounds();
    opt.ablation = c.ablation;
    opt.impact_lag_weeks = c.impact_lag_weeks;
    opt.disease = c.disease;
    opt.retrieve_k = c.retrieval.k;
    opt.retrieve_max_chars = c.retrieval.max_chars;
    opt.concurrency = c.concurrency;
    // The full-series percentile is a deliberate lookahead; it is reported
    // by the audit but does not stop the run.
    opt.enforce_leak_audit = c.ablation.p90_scope == P90Scope::past;
    opt.on_record = [&log](const ForecastRecord& r) {
        log.log(r.ok() ? "info" : "warn", "origin",
                {{"origin", r.origin_date.iso()},
                 {"step", r.horizon_step},
                 {"status", to_string(r.status)},
                 {"y_true", r.y_true},
                 {"mu", r.mu},
                 {"q50", r.q50},
                 {"interpreter_attempts", r.interpreter_attempts},
                 {"forecaster_attempts", r.forecaster_attempts}});
    };
    return opt;
}

json record_json(const ForecastRecord& r) {
    return {{"origin_date", r.origin_date.iso()},
            {"horizon_step", r.horizon_step},
            {"y_true", r.y_true},
            {"mu", r.mu},
            {"q05", r.q05},
            {"q50", r.q50},
            {"q95", r.q95},
            {"family", to_string(r.family)},
            {"n_dispersion", r.n_dispersion},
            {"p_success", r.p_success},
            {"crps", r.crps},
            {"impact", r.impact},
            {"confidence", r.confidence},
            {"uncertainty", r.uncertainty},
            {"volatility", r.volatility},
            {"status", to_string(r.status)}};
}

RollingResult run_pipeline(const RunConfig& c, const Options& o, const Dataset& d,
                           const std::vector<Date>& origins, Logger& log) {
    Providers p = make_providers(c, o, log);
    const PipelineContext ctx{d.series, d.sources, *d.index, *d.embedder, *p.interpreter, *p.forecaster,
                              c.interpreter, c.forecaster};
    const auto t0 = std::chrono::steady_clock::now();
    auto result = run_rolling(ctx, origins, rolling_options(c, log));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t leaks = 0;
    for (const auto& a : result.audits) leaks += a.violations.size();
    log.log(leaks == 0 ? "info" : "warn", "leak_audit",
            {{"origins", result.audits.size()}, {"violations", leaks}});
    log.log("info", "run_complete", {{"origins", origins.size()}, {"seconds", secs}});
    return result;
}

std::vector<Date> origins_for(const RunConfig& c, const Options& o, const WeeklySeries& series) {
    const Date start = !o.start.empty() ? Date::parse(o.start) : c.eval_start.value_or(series.first_date());
    const Date end = !o.end.empty() ? Date::parse(o.end) : c.eval_end.value_or(series.last_date());
    const int every_n = o.every_n > 0 ? o.every_n : c.every_n;
    return select_origins(series, start, end, every_n, c.constants.recent_window, c.constants.horizon);
}

void write_reports(const RunConfig& c, const std::vector<ForecastRecord>& records, std::ostream& out,
                   Logger& log) {
    const std::string hash = c.hash();
    const auto summary = summarize(records);
    const std::filesystem::path dir(c.output_dir);
    const std::string csv_path = (dir / "records.csv").string();
    const std::string json_path = (dir / "summary.json").string();
    const std::string svg_path = (dir / "trajectory.svg").string();
    write_text_file(csv_path, records_csv(records, hash));
    const std::string summary_text = summary_json(summary, hash, c.report_header());
    write_text_file(json_path, summary_text);
    write_text_file(svg_path, trajectory_svg(records, hash, c.region.empty() ? c.disease : c.disease + " " + c.region));
    log.log("info", "reports_written", {{"csv", csv_path}, {"json", json_path}, {"svg", svg_path}});
    out << summary_text;
    if (summary.n_origins == 0) throw ValidationError("every origin was excluded; no metrics to report");
}

int cmd_ingest(const Options& o, std::ostream& out, Logger& log) {
    const RunConfig c = resolve_config(o);
    const Dataset d = load_dataset(c);
    json j = {{"series", {{"weeks", d.series.size()},
                          {"first_week", d.series.first_date().iso()},
                          {"last_week", d.series.last_date().iso()}}},
              {"weather_days", d.weather_days},
              {"weather_weeks", d.sources.weather.size()},
              {"calendar_weeks", d.sources.calendar.size()},
              {"gov_rows", d.sources.gov.size()},
              {"guideline_chunks", d.index->size()},
              {"config_hash", c.hash()}};
    out << j.dump(2) << '\n';
    log.log("info", "ingest_ok", {{"series", c.data.series}});
    return kExitOk;
}

int cmd_forecast(const Options& o, std::ostream& out, Logger& log) {
    const RunConfig c = resolve_config(o);
    const Dataset d = load_dataset(c);
    const auto result = run_pipeline(c, o, d, {Date::parse(o.origin)}, log);
    json arr = json::array();
    for (const auto& r : result.records) arr.push_back(record_json(r));
    out << (arr.size() == 1 ? arr[0] : arr).dump(2) << '\n';
    return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, Logger& log, const std::optional<std::string>& flags) {
    RunConfig c = resolve_config(o);
    if (flags) {
        c.ablation = AblationConfig::from_flags(*flags, c.ablation);
        if (o.out_dir.empty()) {
            const std::string name = c.ablation.flags().empty() ? "full" : c.ablation.flags();
            c.output_dir = (std::filesystem::path(c.output_dir) / ("ablation_" + name)).string();
        }
    }
    const Dataset d = load_dataset(c);
    const auto origins = origins_for(c, o, d.series);
    log.log("info", "evaluate_start",
            {{"origins", origins.size()}, {"first", origins.front().iso()}, {"last", origins.back().iso()},
             {"config_hash", c.hash()}, {"ablation", c.ablation.flags()}});
    const auto result = run_pipeline(c, o, d, origins, log);
    write_reports(c, result.records, out, log);
    return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, Logger& log) {
    const RunConfig c = resolve_config(o);
    const std::string path =
        o.records_path.empty() ? (std::filesystem::path(c.output_dir) / "records.csv").string() : o.records_path;
    const auto records = load_records_csv(path);
    const ReportFormat fmt = parse_report_format(o.format);
    const std::string hash = c.hash();
    std::string text;
    switch (fmt) {
        case ReportFormat::csv: text = records_csv(records, hash); break;
        case ReportFormat::json: text = summary_json(summarize(records), hash, c.report_header()); break;
        case ReportFormat::svg:
            text = trajectory_svg(records, hash, c.region.empty() ? c.disease : c.disease + " " + c.region);
            break;
    }
    if (o.output_path.empty()) {
        out << text;
    } else {
        write_text_file(o.output_path, text);
        log.log("info", "report_written", {{"path", o.output_path}, {"format", o.format}});
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Logger log(err);
    Options o;
    CLI::App app{"Context-aware probabilistic forecasting of weekly case counts", "epicast"};
    app.require_subcommand(1);
    app.add_option("--config", o.config_path, "Run configuration (JSON)");
    app.add_option("--transcripts", o.transcripts_dir, "Transcript directory");
    app.add_option("--mode", o.mode, "Provider mode")->check(CLI::IsMember({"record", "replay", "live"}));
    app.add_option("--p90-scope", o.p90_scope, "Peak percentile scope")->check(CLI::IsMember({"past", "full"}));
    app.add_option("--concurrency", o.concurrency, "Origins run in parallel")->check(CLI::Range(1, 256));
    app.add_option("--run-id", o.run_id, "Run identifier for transcripts");
    app.add_option("--out", o.out_dir, "Output directory");

    auto* ingest = app.add_subcommand("ingest", "Validate and summarize the data files");
    auto* forecast = app.add_subcommand("forecast", "Forecast a single origin and print the record");
    forecast->add_option("--origin", o.origin, "Origin week (YYYY-MM-DD)")->required();
    auto* evaluate = app.add_subcommand("evaluate", "Rolling-origin evaluation");
    auto* ablate = app.add_subcommand("ablate", "Rolling-origin evaluation with channels removed");
    for (auto* sub : {evaluate, ablate}) {
        sub->add_option("--start", o.start, "First origin week (YYYY-MM-DD)");
        sub->add_option("--end", o.end, "Last origin week (YYYY-MM-DD)");
        sub->add_option("--every-n", o.every_n, "Use every n-th week as an origin")->check(CLI::PositiveNumber);
    }
    ablate->add_option("--flags", o.flags, "no-agent1,no-climate,no-rag,no-school-event")->required();
    auto* report = app.add_subcommand("report", "Render a report from a records CSV");
    report->add_option("--format", o.format, "csv, json or svg")->check(CLI::IsMember({"csv", "json", "svg"}));
    report->add_option("--records", o.records_path, "Records CSV (default: <out>/records.csv)");
    report->add_option("--output", o.output_path, "Write to this file instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        log.log("error", "usage", {{"message", e.what()}});
        return kExitValidation;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(o, out, log);
        if (forecast->parsed()) return cmd_forecast(o, out, log);
        if (evaluate->parsed()) return cmd_evaluate(o, out, log, std::nullopt);
        if (ablate->parsed()) return cmd_evaluate(o, out, log, o.flags);
        if (report->parsed()) return cmd_report(o, out, log);
    } catch (const ValidationError& e) {
        log.log("error", "validation", {{"message", e.what()}});
        return kExitValidation;
    } catch (const InsufficientHistory& e) {
        log.log("error", "validation", {{"message", e.what()}});
        return kExitValidation;
    } catch (const IoError& e) {
        log.log("error", "io", {{"message", e.what()}, {"path", e.path()}});
        return kExitValidation;
    } catch (const TransportError& e) {
        log.log("error", "transport", {{"message", e.what()}});
        return kExitRun;
    } catch (const LeakError& e) {
        log.log("error", "leak", {{"message", e.what()}});
        return kExitRun;
    } catch (const std::exception& e) {
        log.log("error", "run", {{"message", e.what()}});
        return kExitRun;
    }
    return kExitValidation;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace epicast::cli
