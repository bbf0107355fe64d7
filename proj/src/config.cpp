#include "epicast/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "epicast/digest.hpp"
#include "epicast/error.hpp"

namespace epicast {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ValidationError("config: " + (where.empty() ? "root" : where) + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ValidationError("config: unknown key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

std::string path_of(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

template <typename T>
void read(const json& obj, const std::string& where, const std::string& key, T& out) {
    if (!obj.contains(key) || obj.at(key).is_null()) return;
    const json& v = obj.at(key);
    const std::string name = path_of(where, key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ValidationError("config: '" + name + "' must be a boolean");
        out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ValidationError("config: '" + name + "' must be a string");
        out = v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ValidationError("config: '" + name + "' must be an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (v.get<long long>() < 0) throw ValidationError("config: '" + name + "' must be non-negative");
        }
        out = v.get<T>();
    } else {
        if (!v.is_number()) throw ValidationError("config: '" + name + "' must be a number");
        out = v.get<T>();
    }
}

std::string resolve(const std::string& base_dir, const std::string& p) {
    if (p.empty()) return p;
    const std::filesystem::path path(p);
    if (path.is_absolute() || base_dir.empty()) return p;
    return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

LlmProviderConfig parse_provider(const json& j, const std::string& where, double default_temperature) {
    LlmProviderConfig p;
    p.temperature = default_temperature;
    reject_unknown(j, where,
                   {"provider", "endpoint_url", "model", "temperature", "max_tokens", "api_key_env", "generator",
                    "script", "timeout_seconds"});
    std::string kind = to_string(p.provider_id);
    read(j, where, "provider", kind);
    try {
        p.provider_id = parse_provider_kind(kind);
    } catch (const ValidationError&) {
        throw ValidationError("config: '" + where + ".provider' has unknown value '" + kind + "'");
    }
    read(j, where, "endpoint_url", p.endpoint_url);
    read(j, where, "model", p.model_name);
    read(j, where, "temperature", p.temperature);
    read(j, where, "max_tokens", p.max_tokens);
    read(j, where, "api_key_env", p.api_key_env);
    read(j, where, "generator", p.generator);
    read(j, where, "script", p.script);
    read(j, where, "timeout_seconds", p.timeout_seconds);
    return p;
}

void validate_provider(const LlmProviderConfig& p, const std::string& where) {
    if (!(p.temperature >= 0.0 && p.temperature <= 2.0)) {
        throw ValidationError("config: '" + where + ".temperature' must lie in [0, 2]");
    }
    if (p.max_tokens < 1) throw ValidationError("config: '" + where + ".max_tokens' must be >= 1");
    if (!(p.timeout_seconds > 0.0)) throw ValidationError("config: '" + where + ".timeout_seconds' must be > 0");
    if (p.provider_id == ProviderKind::openai_compatible && p.endpoint_url.empty()) {
        throw ValidationError("config: '" + where + ".endpoint_url' is required for openai_compatible");
    }
    if (p.provider_id == ProviderKind::mock && p.generator != "momentum" && p.generator != "persistence" &&
        p.generator != "none" && !p.generator.empty()) {
        throw ValidationError("config: '" + where + ".generator' has unknown value '" + p.generator + "'");
    }
}

json data_json(const DataPaths& d) {
    return {{"series", d.series},
            {"weather", d.weather},
            {"calendar", d.calendar},
            {"gov", d.gov},
            {"guidelines_dir", d.guidelines_dir}};
}

json ablation_json(const AblationConfig& a) {
    return {{"no_agent1", a.no_agent1},
            {"no_climate", a.no_climate},
            {"no_rag", a.no_rag},
            {"no_school_event", a.no_school_event},
            {"p90_scope", to_string(a.p90_scope)}};
}

json constants_json(const Constants& c) {
    return {{"horizon", c.horizon},
            {"recent_window", c.recent_window},
            {"volatility_min", c.volatility_min},
            {"volatility_max", c.volatility_max}};
}

}  // namespace

json provider_json(const LlmProviderConfig& p) {
    return {{"provider", to_string(p.provider_id)},
            {"endpoint_url", p.endpoint_url},
            {"model", p.model_name},
            {"temperature", p.temperature},
            {"max_tokens", p.max_tokens},
            {"api_key_env", p.api_key_env},
            {"generator", p.generator},
            {"script", p.script},
            {"timeout_seconds", p.timeout_seconds}};
}

json RunConfig::identity_json() const {
    return {{"data", data_json(declared_data)},
            {"providers", {{"interpreter", provider_json(interpreter)}, {"forecaster", provider_json(forecaster)}}},
            {"constants", constants_json(constants)},
            {"ablation", ablation_json(ablation)},
            {"retrieval", {{"k", retrieval.k}, {"max_chars", retrieval.max_chars}, {"chunk_chars", retrieval.chunk_chars}}},
            {"region", region},
            {"disease", disease},
            {"impact_lag_weeks", impact_lag_weeks}};
}

std::string RunConfig::hash() const { return sha256_hex(identity_json().dump()); }

json RunConfig::report_header() const {
    const Constants defaults;
    json overrides = json::array();
    const json c = constants_json(constants);
    const json d = constants_json(defaults);
    for (auto it = d.begin(); it != d.end(); ++it) {
        if (c.at(it.key()) != it.value()) overrides.push_back(it.key());
    }
    return {{"constants", c},
            {"constant_overrides", overrides},
            {"ablation", ablation_json(ablation)},
            {"ablation_flags", ablation.flags()},
            {"interpreter", {{"provider", to_string(interpreter.provider_id)}, {"model", interpreter.model_name},
                             {"temperature", interpreter.temperature}}},
            {"forecaster", {{"provider", to_string(forecaster.provider_id)}, {"model", forecaster.model_name},
                            {"temperature", forecaster.temperature}}}};
}

void RunConfig::validate() const {
    if (constants.horizon < 1 || constants.horizon > 52) {
        throw ValidationError("config: 'constants.horizon' must lie in [1, 52]");
    }
    // growth_rate looks back four weeks from the origin.
    if (constants.recent_window < 5 || constants.recent_window > 104) {
        throw ValidationError("config: 'constants.recent_window' must lie in [5, 104]");
    }
    if (!(constants.volatility_min > 0.0 && constants.volatility_min <= 1.0)) {
        throw ValidationError("config: 'constants.volatility_min' must lie in (0, 1]");
    }
    if (!(constants.volatility_max > 0.0 && constants.volatility_max <= 1.0)) {
        throw ValidationError("config: 'constants.volatility_max' must lie in (0, 1]");
    }
    if (constants.volatility_min > constants.volatility_max) {
        throw ValidationError("config: 'constants.volatility_min' must not exceed 'constants.volatility_max'");
    }
    if (impact_lag_weeks < 0 || impact_lag_weeks > 52) {
        throw ValidationError("config: 'impact_lag_weeks' must lie in [0, 52]");
    }
    if (every_n < 1) throw ValidationError("config: 'evaluation.every_n' must be >= 1");
    if (concurrency < 1 || concurrency > 256) throw ValidationError("config: 'concurrency' must lie in [1, 256]");
    if (retrieval.k < 1) throw ValidationError("config: 'retrieval.k' must be >= 1");
    if (retrieval.max_chars < 1) throw ValidationError("config: 'retrieval.max_chars' must be >= 1");
    if (retrieval.chunk_chars < 1) throw ValidationError("config: 'retrieval.chunk_chars' must be >= 1");
    if (eval_start && eval_end && *eval_end < *eval_start) {
        throw ValidationError("config: 'evaluation.end' precedes 'evaluation.start'");
    }
    if (run_id.empty() || run_id.find_first_of("/\\") != std::string::npos) {
        throw ValidationError("config: 'run_id' must be a non-empty name without path separators");
    }
    validate_provider(interpreter, "providers.interpreter");
    validate_provider(forecaster, "providers.forecaster");
}

RunConfig parse_config(const json& j, const std::string& base_dir) {
    RunConfig c;
    c.forecaster.temperature = kForecasterTemperature;
    reject_unknown(j, "",
                   {"data", "providers", "constants", "ablation", "retrieval", "region", "disease",
                    "impact_lag_weeks", "evaluation", "output_dir", "concurrency", "run_id"});
    if (j.contains("data")) {
        const json& d = j.at("data");
        reject_unknown(d, "data", {"series", "weather", "calendar", "gov", "guidelines_dir"});
        read(d, "data", "series", c.declared_data.series);
        read(d, "data", "weather", c.declared_data.weather);
        read(d, "data", "calendar", c.declared_data.calendar);
        read(d, "data", "gov", c.declared_data.gov);
        read(d, "data", "guidelines_dir", c.declared_data.guidelines_dir);
    }
    c.data = {resolve(base_dir, c.declared_data.series), resolve(base_dir, c.declared_data.weather),
              resolve(base_dir, c.declared_data.calendar), resolve(base_dir, c.declared_data.gov),
              resolve(base_dir, c.declared_data.guidelines_dir)};
    if (j.contains("providers")) {
        const json& p = j.at("providers");
        reject_unknown(p, "providers", {"interpreter", "forecaster"});
        if (p.contains("interpreter")) {
            c.interpreter = parse_provider(p.at("interpreter"), "providers.interpreter", kInterpreterTemperature);
        }
        if (p.contains("forecaster")) {
            c.forecaster = parse_provider(p.at("forecaster"), "providers.forecaster", kForecasterTemperature);
        }
    }
    c.interpreter.script = resolve(base_dir, c.interpreter.script);
    c.forecaster.script = resolve(base_dir, c.forecaster.script);
    if (j.contains("constants")) {
        const json& k = j.at("constants");
        reject_unknown(k, "constants", {"horizon", "recent_window", "volatility_min", "volatility_max"});
        read(k, "constants", "horizon", c.constants.horizon);
        read(k, "constants", "recent_window", c.constants.recent_window);
        read(k, "constants", "volatility_min", c.constants.volatility_min);
        read(k, "constants", "volatility_max", c.constants.volatility_max);
    }
    if (j.contains("ablation")) {
        const json& a = j.at("ablation");
        reject_unknown(a, "ablation", {"no_agent1", "no_climate", "no_rag", "no_school_event", "p90_scope"});
        read(a, "ablation", "no_agent1", c.ablation.no_agent1);
        read(a, "ablation", "no_climate", c.ablation.no_climate);
        read(a, "ablation", "no_rag", c.ablation.no_rag);
        read(a, "ablation", "no_school_event", c.ablation.no_school_event);
        std::string scope = to_string(c.ablation.p90_scope);
        read(a, "ablation", "p90_scope", scope);
        try {
            c.ablation.p90_scope = parse_p90_scope(scope);
        } catch (const ValidationError&) {
            throw ValidationError("config: 'ablation.p90_scope' has unknown value '" + scope + "'");
        }
    }
    if (j.contains("retrieval")) {
        const json& r = j.at("retrieval");
        reject_unknown(r, "retrieval", {"k", "max_chars", "chunk_chars"});
        read(r, "retrieval", "k", c.retrieval.k);
        read(r, "retrieval", "max_chars", c.retrieval.max_chars);
        read(r, "retrieval", "chunk_chars", c.retrieval.chunk_chars);
    }
    if (j.contains("evaluation")) {
        const json& e = j.at("evaluation");
        reject_unknown(e, "evaluation", {"start", "end", "every_n"});
        for (const char* key : {"start", "end"}) {
            std::string s;
            read(e, "evaluation", key, s);
            if (s.empty()) continue;
            try {
                (std::string(key) == "start" ? c.eval_start : c.eval_end) = Date::parse(s);
            } catch (const ValidationError& ex) {
                throw ValidationError("config: 'evaluation." + std::string(key) + "': " + ex.what());
            }
        }
        read(e, "evaluation", "every_n", c.every_n);
    }
    read(j, "", "region", c.region);
    read(j, "", "disease", c.disease);
    read(j, "", "impact_lag_weeks", c.impact_lag_weeks);
    read(j, "", "output_dir", c.output_dir);
    c.output_dir = resolve(base_dir, c.output_dir);
    read(j, "", "concurrency", c.concurrency);
    read(j, "", "run_id", c.run_id);
    c.validate();
    return c;
}

RunConfig parse_config_text(const std::string& text, const std::string& base_dir, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(source + ": invalid JSON: " + e.what());
    }
    return parse_config(j, base_dir);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), std::filesystem::path(path).parent_path().string(), path);
}

}  // namespace epicast
