#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epicast/llm_provider.hpp"

namespace epicast {

/// Event-interpreter output. Ranges are enforced by the parser, so any
/// instance obtained from parse_context_signal is valid.
struct ContextSignal {
    double transmission_impact = 0.0;  // [-1, 1]
    double confidence = 0.0;           // [0, 1]
    std::string event_summary;
    std::vector<std::string> risk_notes;
    std::optional<std::string> lag_rationale;

    /// Stand-in when the interpreter is ablated: no impact, no confidence.
    static ContextSignal neutral();
    bool operator==(const ContextSignal&) const = default;
};

/// Forecast-generator output before calibration. One uncertainty scale
/// applies to every horizon step.
struct RawForecast {
    std::vector<double> forecast_mean;  // length = horizon, each >= 0
    double uncertainty_scale = 0.0;     // [0, 1]
    std::string rationale;

    bool operator==(const RawForecast&) const = default;
};

template <typename T>
struct ParseResult {
    std::optional<T> value;
    std::string error;

    explicit operator bool() const { return value.has_value(); }
};

/// Strict parse of one JSON object. Surrounding whitespace is allowed;
/// Markdown fences, trailing text, missing or mistyped fields and
/// out-of-range numbers are rejected. Unknown keys are ignored.
ParseResult<ContextSignal> parse_context_signal(std::string_view raw);

/// As parse_context_signal, but unknown top-level keys are rejected and
/// forecast_mean must have exactly `horizon` non-negative entries.
ParseResult<RawForecast> parse_raw_forecast(std::string_view raw, int horizon);

/// Outcome of a provider call under the retry-once protocol. `value` is
/// empty when both attempts failed validation; the origin is then invalid.
template <typename T>
struct CallResult {
    std::optional<T> value;
    int attempts = 0;
    std::string request_hash;
    std::vector<std::string> errors;

    bool valid() const { return value.has_value(); }
};

inline constexpr int kMaxAttempts = 2;

/// Sends `request`; on a transport or contract failure the identical
/// request is sent once more. Two contract failures yield an invalid result.
/// If the final attempt failed at the transport level the TransportError is
/// rethrown, since no origin can succeed against a dead endpoint.
CallResult<ContextSignal> interpret(LlmProvider& provider, const ChatRequest& request);
CallResult<RawForecast> generate_raw_forecast(LlmProvider& provider, const ChatRequest& request,
                                              int horizon);

}  // namespace epicast
