#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "epicast/ablation.hpp"
#include "epicast/evidence.hpp"
#include "epicast/llm_provider.hpp"
#include "epicast/metrics.hpp"
#include "epicast/mock_generators.hpp"
#include "epicast/retrieval.hpp"
#include "epicast/series.hpp"
#include "epicast/trend.hpp"

namespace epicast {

/// Shared read-only inputs of a rolling run.
struct PipelineContext {
    const WeeklySeries& series;
    const EvidenceSources& sources;
    const VectorIndex& index;
    const EmbeddingProvider& embedder;
    LlmProvider& interpreter;
    LlmProvider& forecaster;
    LlmProviderConfig interpreter_config;
    LlmProviderConfig forecaster_config;
};

struct RollingOptions {
    int horizon = 1;
    std::size_t recent_window = 8;
    VolatilityBounds volatility_bounds;
    AblationConfig ablation;
    int impact_lag_weeks = 1;
    std::string disease = "HFMD";
    std::size_t retrieve_k = kRetrieveTopK;
    std::size_t retrieve_max_chars = kRetrieveMaxChars;
    int concurrency = 1;
    /// Throw LeakError as soon as an origin's inputs fail the audit.
    bool enforce_leak_audit = true;
    /// Called once per record, in origin order, after the run.
    std::function<void(const ForecastRecord&)> on_record;
    /// Called with every prompt sent to a provider. May run on worker threads.
    std::function<void(const Date& origin, AgentRole role, const Prompt& prompt)> on_prompt;
};

/// Inputs of one origin that carry dates, checked against the origin.
struct OriginAudit {
    Date origin;
    Date latest_series_week;    // newest week of every series slice seen
    Date latest_weather_week;   // origin when no weather was used
    Date latest_gov_month_end;  // origin when no gov stats were used
    Date latest_event_week;     // origin when no events were used
    std::vector<std::string> violations;

    bool clean() const { return violations.empty(); }
};

struct RollingResult {
    std::vector<ForecastRecord> records;  // origin order, horizon steps inside
    std::vector<OriginAudit> audits;      // one per origin
};

/// Weeks of `series` in [start, end], every `every_n`-th, keeping only weeks
/// with enough history and enough observed future for `horizon`. Throws
/// ValidationError when nothing remains.
std::vector<Date> select_origins(const WeeklySeries& series, const Date& start, const Date& end,
                                 int every_n, std::size_t recent_window, int horizon);

/// Rolling-origin forecast over `origins`. Each origin sees only the series
/// up to and including its week. Origins whose agent replies fail the
/// contract twice become invalid_origin records; transport failures and
/// leaks abort the run.
RollingResult run_rolling(const PipelineContext& ctx, const std::vector<Date>& origins,
                          const RollingOptions& options);

}  // namespace epicast
