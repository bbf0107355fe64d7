#include "epicast/contracts.hpp"

#include <cmath>

#include "epicast/error.hpp"

namespace epicast {

using nlohmann::json;

ContextSignal ContextSignal::neutral() { return {0.0, 0.0, "", {}, std::nullopt}; }

namespace {

std::string_view trim(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

// Parses exactly one JSON object; sets `error` otherwise.
std::optional<json> parse_object(std::string_view raw, std::string& error) {
    const auto body = trim(raw);
    if (body.rfind("```", 0) == 0) {
        error = "response is wrapped in a Markdown fence";
        return std::nullopt;
    }
    json j = json::parse(body.begin(), body.end(), nullptr, false);
    if (j.is_discarded()) {
        error = "response is not valid JSON";
        return std::nullopt;
    }
    if (!j.is_object()) {
        error = "response is not a JSON object";
        return std::nullopt;
    }
    return j;
}

std::optional<double> number_in(const json& j, const char* key, double lo, double hi, std::string& error) {
    auto it = j.find(key);
    if (it == j.end()) {
        error = std::string("missing field '") + key + "'";
        return std::nullopt;
    }
    if (!it->is_number()) {
        error = std::string("field '") + key + "' is not a number";
        return std::nullopt;
    }
    const double v = it->get<double>();
    if (!std::isfinite(v) || v < lo || v > hi) {
        error = std::string("field '") + key + "' out of range";
        return std::nullopt;
    }
    return v;
}

template <typename T>
CallResult<T> call_with_retry(LlmProvider& provider, const ChatRequest& request, auto&& parse) {
    CallResult<T> result;
    result.request_hash = request.prompt.hash();
    bool last_was_transport = false;
    std::string transport_message;
    for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
        result.attempts = attempt;
        std::string raw;
        try {
            raw = provider.complete(request);
        } catch (const TransportError& e) {
            last_was_transport = true;
            transport_message = e.what();
            result.errors.push_back(std::string("transport: ") + e.what());
            continue;
        }
        last_was_transport = false;
        ParseResult<T> parsed = parse(raw);
        if (parsed.value) {
            result.value = std::move(parsed.value);
            return result;
        }
        result.errors.push_back(parsed.error);
    }
    if (last_was_transport) throw TransportError(transport_message);
    return result;
}

}  // namespace

ParseResult<ContextSignal> parse_context_signal(std::string_view raw) {
    ParseResult<ContextSignal> r;
    auto j = parse_object(raw, r.error);
    if (!j) return r;
    ContextSignal s;
    auto impact = number_in(*j, "transmission_impact", -1.0, 1.0, r.error);
    if (!impact) return r;
    auto conf = number_in(*j, "confidence", 0.0, 1.0, r.error);
    if (!conf) return r;
    s.transmission_impact = *impact;
    s.confidence = *conf;

    auto summary = j->find("event_summary");
    if (summary == j->end() || !summary->is_string()) {
        r.error = "field 'event_summary' missing or not a string";
        return r;
    }
    s.event_summary = summary->get<std::string>();

    auto notes = j->find("risk_notes");
    if (notes == j->end() || !notes->is_array()) {
        r.error = "field 'risk_notes' missing or not an array";
        return r;
    }
    for (const auto& n : *notes) {
        if (!n.is_string()) {
            r.error = "risk_notes entries must be strings";
            return r;
        }
        s.risk_notes.push_back(n.get<std::string>());
    }

    if (auto lag = j->find("lag_rationale"); lag != j->end() && !lag->is_null()) {
        if (!lag->is_string()) {
            r.error = "field 'lag_rationale' is not a string";
            return r;
        }
        s.lag_rationale = lag->get<std::string>();
    }
    r.value = std::move(s);
    return r;
}

ParseResult<RawForecast> parse_raw_forecast(std::string_view raw, int horizon) {
    ParseResult<RawForecast> r;
    auto j = parse_object(raw, r.error);
    if (!j) return r;
    for (const auto& [key, _] : j->items()) {
        if (key != "forecast_mean" && key != "uncertainty_scale" && key != "rationale") {
            r.error = "unexpected top-level key '" + key + "'";
            return r;
        }
    }
    RawForecast f;
    auto mean = j->find("forecast_mean");
    if (mean == j->end() || !mean->is_array()) {
        r.error = "field 'forecast_mean' missing or not an array";
        return r;
    }
    if (static_cast<int>(mean->size()) != horizon) {
        r.error = "forecast_mean has length " + std::to_string(mean->size()) + ", expected " +
                  std::to_string(horizon);
        return r;
    }
    for (const auto& v : *mean) {
        if (!v.is_number()) {
            r.error = "forecast_mean entries must be numbers";
            return r;
        }
        const double x = v.get<double>();
        if (!std::isfinite(x) || x < 0.0) {
            r.error = "forecast_mean entries must be finite and >= 0";
            return r;
        }
        f.forecast_mean.push_back(x);
    }
    auto u = number_in(*j, "uncertainty_scale", 0.0, 1.0, r.error);
    if (!u) return r;
    f.uncertainty_scale = *u;
    auto rationale = j->find("rationale");
    if (rationale == j->end() || !rationale->is_string()) {
        r.error = "field 'rationale' missing or not a string";
        return r;
    }
    f.rationale = rationale->get<std::string>();
    r.value = std::move(f);
    return r;
}

CallResult<ContextSignal> interpret(LlmProvider& provider, const ChatRequest& request) {
    return call_with_retry<ContextSignal>(provider, request,
                                          [](const std::string& raw) { return parse_context_signal(raw); });
}

CallResult<RawForecast> generate_raw_forecast(LlmProvider& provider, const ChatRequest& request,
                                              int horizon) {
    return call_with_retry<RawForecast>(
        provider, request, [horizon](const std::string& raw) { return parse_raw_forecast(raw, horizon); });
}

}  // namespace epicast
