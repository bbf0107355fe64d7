#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "epicast/metrics.hpp"

namespace epicast {

enum class ReportFormat { csv, json, svg };

std::string to_string(ReportFormat f);
ReportFormat parse_report_format(const std::string& s);

inline constexpr const char* kRecordCsvHeader =
    "origin_date,horizon_step,y_true,mu,q05,q50,q95,family,n_dispersion,p_success,crps,impact,"
    "confidence,uncertainty,volatility,status,interpreter_attempts,forecaster_attempts,config_hash";

/// One header line plus one row per record. Reals use round-trip precision.
std::string records_csv(const std::vector<ForecastRecord>& records, const std::string& config_hash);

/// Reads back what records_csv wrote. Throws ValidationError on malformed rows.
std::vector<ForecastRecord> parse_records_csv(const std::string& text, const std::string& source);
std::vector<ForecastRecord> load_records_csv(const std::string& path);

/// Metric keys at the top level plus `config_hash` and the free-form `header`
/// (resolved constants, ablation flags). Sorted keys, two-space indent.
std::string summary_json(const MetricsSummary& summary, const std::string& config_hash,
                         const nlohmann::json& header);

/// Trajectory plot of the ok records for horizon step 1: observed line,
/// q50 line and a shaded q05-q95 band over the target weeks.
std::string trajectory_svg(const std::vector<ForecastRecord>& records, const std::string& config_hash,
                           const std::string& title);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace epicast
