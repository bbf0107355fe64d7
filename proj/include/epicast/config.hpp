#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "epicast/ablation.hpp"
#include "epicast/date.hpp"
#include "epicast/llm_provider.hpp"
#include "epicast/retrieval.hpp"
#include "epicast/trend.hpp"

namespace epicast {

struct DataPaths {
    std::string series;
    std::string weather;
    std::string calendar;
    std::string gov;
    std::string guidelines_dir;
    bool operator==(const DataPaths&) const = default;
};

/// Forecasting constants. Defaults are the published settings.
struct Constants {
    int horizon = 1;
    std::size_t recent_window = 8;
    double volatility_min = 0.05;
    double volatility_max = 0.50;

    VolatilityBounds volatility_bounds() const { return {volatility_min, volatility_max}; }
    bool operator==(const Constants&) const = default;
};

struct RetrievalSettings {
    std::size_t k = kRetrieveTopK;
    std::size_t max_chars = kRetrieveMaxChars;
    std::size_t chunk_chars = kChunkMaxChars;
    bool operator==(const RetrievalSettings&) const = default;
};

struct RunConfig {
    /// Paths as written in the file; `data` holds them resolved against the
    /// config file's directory.
    DataPaths declared_data;
    DataPaths data;
    LlmProviderConfig interpreter;
    LlmProviderConfig forecaster;
    Constants constants;
    AblationConfig ablation;
    RetrievalSettings retrieval;
    std::string region;
    std::string disease = "HFMD";
    int impact_lag_weeks = 1;
    std::optional<Date> eval_start;
    std::optional<Date> eval_end;
    int every_n = 1;
    std::string output_dir = "out";
    int concurrency = 1;
    std::string run_id = "run";

    /// Everything that can change a forecast: declared data paths, providers,
    /// constants, ablation, retrieval and prompt settings. Output location,
    /// concurrency and run id are left out.
    nlohmann::json identity_json() const;
    /// SHA-256 of identity_json() serialized compactly with sorted keys.
    std::string hash() const;
    /// Constants and ablation flags embedded in every report.
    nlohmann::json report_header() const;
    /// Throws ValidationError naming the offending key.
    void validate() const;
};

/// Strict parse: unknown keys and mistyped values are errors naming the key.
/// Relative paths are resolved against `base_dir`. Missing keys take defaults.
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir);
RunConfig parse_config_text(const std::string& text, const std::string& base_dir,
                            const std::string& source = "config");
/// Throws IoError when the file is missing, ValidationError when it is invalid.
RunConfig load_config(const std::string& path);

nlohmann::json provider_json(const LlmProviderConfig& p);

}  // namespace epicast
