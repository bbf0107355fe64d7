#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "epicast/contracts.hpp"
#include "epicast/evidence.hpp"
#include "epicast/llm_provider.hpp"
#include "epicast/retrieval.hpp"
#include "epicast/series.hpp"
#include "epicast/trend.hpp"

namespace epicast {

/// System prompt of the event interpreter.
extern const std::string_view kInterpreterSystemPrompt;
/// Disease background appended to the interpreter system prompt.
extern const std::string_view kHfmdKnowledgePrompt;
/// System prompt of the forecast generator.
extern const std::string_view kForecastSystemPrompt;

/// Header line that opens the retrieved-passage block.
inline constexpr std::string_view kPassagesHeader = "RETRIEVED GUIDELINE PASSAGES:";

struct InterpreterPromptInputs {
    const EvidencePack& pack;
    const TrendStats& trend;
    const std::vector<GuidelineChunk>& retrieved;
    const WeeklySeries& recent;
    Date origin;
    int horizon_weeks = 1;
    int impact_lag_weeks = 1;
    std::string disease = "HFMD";
};

/// Retrieved passages (if any) lead the system message, followed by the
/// interpreter instructions and disease background. The user message is the
/// canonical JSON payload. Byte-identical for identical inputs.
Prompt build_interpreter_prompt(const InterpreterPromptInputs& in);

struct ForecasterPromptInputs {
    const WeeklySeries& recent;
    const WeeklySeries& full_history;
    const ContextSignal& signal;
    Volatility volatility;
    const TrendStats& trend;
    int horizon_weeks = 1;
    int impact_lag_weeks = 1;
    std::string mode = "standard";
};

Prompt build_forecaster_prompt(const ForecasterPromptInputs& in);

/// Ordinary least-squares slope of counts against week index (cases/week).
/// Throws InsufficientHistory below two points.
double slope(const WeeklySeries& recent);

}  // namespace epicast
