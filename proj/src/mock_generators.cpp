#include "epicast/mock_generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "epicast/error.hpp"
#include "epicast/evidence.hpp"

namespace epicast {

using nlohmann::json;

std::string to_string(AgentRole r) { return r == AgentRole::interpreter ? "interpreter" : "forecaster"; }

namespace {

json user_payload(const ChatRequest& request) {
    json j = json::parse(request.prompt.user, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw TransportError("mock provider cannot read the request payload");
    }
    return j;
}

std::string momentum_interpreter(const ChatRequest& request) {
    const json in = user_payload(request);
    const json ext = in.value("external_data", json::object());
    double impact = 0.0;
    json notes = json::array();
    int channels = 0;

    if (ext.contains("events") && !ext["events"].empty()) {
        ++channels;
        const auto& events = ext["events"];
        const json& ev = events.size() > 1 ? events[1] : events[0];
        const std::string status = ev.value("school_status", "in_session");
        if (status == "in_session") {
            impact += 0.25;
            notes.push_back("schools in session");
        } else {
            impact -= 0.35;
            notes.push_back(status == "summer_break" ? "summer break" : "winter break");
        }
        if (!ev.value("holidays", json::array()).empty()) {
            impact -= 0.05;
            notes.push_back("public holiday");
        }
    }
    if (ext.contains("weather") && !ext["weather"].empty()) {
        const json& w = ext["weather"].back();
        if (w.contains("temp_c")) {
            ++channels;
            const double t = w["temp_c"].get<double>();
            if (t >= 20.0 && t <= 30.0) {
                impact += 0.1;
                notes.push_back("temperature in favorable band");
            } else if (t < 12.0) {
                impact -= 0.1;
                notes.push_back("cold weather");
            }
        }
    }
    impact = round_to(std::clamp(impact, -1.0, 1.0), 2);
    const double confidence = channels == 2 ? 0.7 : channels == 1 ? 0.5 : 0.3;
    json out = {{"transmission_impact", impact},
                {"confidence", confidence},
                {"event_summary", impact > 0   ? "Context favors transmission from next week."
                                  : impact < 0 ? "Context suppresses transmission from next week."
                                               : "No strong external drivers."},
                {"risk_notes", notes},
                {"lag_rationale", "effects applied from t+1"}};
    return out.dump();
}

std::string neutral_interpreter(const ChatRequest&) {
    return json{{"transmission_impact", 0.0},
                {"confidence", 0.0},
                {"event_summary", "Context ignored."},
                {"risk_notes", json::array()}}
        .dump();
}

std::string momentum_forecaster(const ChatRequest& request) {
    const json in = user_payload(request);
    const auto recent = in.at("recent_values").get<std::vector<double>>();
    const double last = recent.empty() ? 0.0 : recent.back();
    const double slope = in.at("recent_trend").value("slope", 0.0);
    const double impact = in.value("transmission_impact", 0.0);
    const double confidence = in.value("confidence", 0.0);
    const int h = in.value("horizon_weeks", 1);
    const int lag = in.value("impact_lag_weeks", 1);
    json mean = json::array();
    for (int k = 1; k <= h; ++k) {
        double y = last + 0.5 * slope * k;
        if (k >= lag) y *= 1.0 + 0.15 * impact * confidence;
        mean.push_back(round_to(std::max(0.0, y), 1));
    }
    const double u = round_to(std::clamp(0.3 + 0.2 * (1.0 - confidence), 0.0, 1.0), 2);
    return json{{"forecast_mean", mean},
                {"uncertainty_scale", u},
                {"rationale", "Recent momentum drives week 1; context applied from the lag week."}}
        .dump();
}

std::string persistence_forecaster(const ChatRequest& request) {
    const json in = user_payload(request);
    const auto recent = in.at("recent_values").get<std::vector<double>>();
    const double last = recent.empty() ? 0.0 : recent.back();
    json mean = json::array();
    for (int k = 0; k < in.value("horizon_weeks", 1); ++k) mean.push_back(last);
    return json{{"forecast_mean", mean},
                {"uncertainty_scale", 0.3},
                {"rationale", "Last observed value carried forward; lag policy not applied."}}
        .dump();
}

}  // namespace

MockProvider::Generator make_mock_generator(const std::string& name, AgentRole role) {
    if (name == "momentum") {
        return role == AgentRole::interpreter ? MockProvider::Generator(momentum_interpreter)
                                              : MockProvider::Generator(momentum_forecaster);
    }
    if (name == "persistence") {
        return role == AgentRole::interpreter ? MockProvider::Generator(neutral_interpreter)
                                              : MockProvider::Generator(persistence_forecaster);
    }
    if (name.empty() || name == "none") return {};
    throw ValidationError("unknown mock generator '" + name + "'");
}

std::shared_ptr<LlmProvider> make_provider(const LlmProviderConfig& config, AgentRole role) {
    switch (config.provider_id) {
        case ProviderKind::openai_compatible:
            return std::make_shared<OpenAiCompatibleProvider>(config);
        case ProviderKind::mock: {
            auto mock = std::make_shared<MockProvider>(make_mock_generator(config.generator, role));
            if (!config.script.empty()) {
                std::ifstream in(config.script);
                if (!in) throw IoError(config.script, "cannot open mock script");
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    json j = json::parse(line, nullptr, false);
                    if (j.is_discarded() || !j.contains("request_hash") || !j.contains("raw_response")) {
                        throw ValidationError(config.script + ": malformed script line");
                    }
                    mock->script(j["request_hash"].get<std::string>(), {j["raw_response"].get<std::string>()});
                }
            }
            return mock;
        }
        case ProviderKind::replay:
            break;
    }
    throw ValidationError("replay providers are built from transcripts");
}

}  // namespace epicast
