#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epicast/ablation.hpp"
#include "epicast/date.hpp"

namespace epicast {

struct DailyWeather {
    Date date;
    std::optional<double> temp_c;
    std::optional<double> humidity_pct;
    std::optional<double> precip_mm;
};

/// Seven-day weather summary. An empty optional marks a field with no
/// observations in that week.
struct WeatherWeekly {
    Date week_start;
    std::optional<double> mean_temp_c;
    std::optional<double> mean_humidity_pct;
    std::optional<double> total_precip_mm;

    bool any_present() const { return mean_temp_c || mean_humidity_pct || total_precip_mm; }
    bool operator==(const WeatherWeekly&) const = default;
};

enum class SchoolStatus { in_session, summer_break, winter_break };

std::string to_string(SchoolStatus s);
SchoolStatus parse_school_status(const std::string& s);

struct CalendarEvent {
    Date week_start;
    SchoolStatus school_status = SchoolStatus::in_session;
    std::vector<std::string> holidays;

    bool operator==(const CalendarEvent&) const = default;
};

/// Monthly surveillance total for one region.
struct GovStat {
    YearMonth period;
    std::string region;
    std::int64_t total_cases = 0;
    /// (this - previous) / max(1, previous); only set when the previous
    /// calendar month for the same region is on file.
    std::optional<double> mom_growth;

    bool operator==(const GovStat&) const = default;
};

/// Source of free-text web signals. The default client returns nothing.
class WebSignalClient {
public:
    virtual ~WebSignalClient() = default;
    virtual std::vector<std::string> fetch(const Date& as_of, const std::string& region) const = 0;
};

class NullWebSignalClient final : public WebSignalClient {
public:
    std::vector<std::string> fetch(const Date&, const std::string&) const override { return {}; }
};

/// Ingested stores. Built once at startup and shared read-only between workers.
struct EvidenceSources {
    std::vector<WeatherWeekly> weather;  // sorted by week_start
    std::vector<CalendarEvent> calendar; // sorted by week_start
    std::vector<GovStat> gov;            // sorted by (period, region)
    std::string region;                  // gov rows of other regions are ignored; empty keeps all
    std::shared_ptr<const WebSignalClient> web;
};

struct EvidencePack {
    Date as_of_date;
    std::vector<WeatherWeekly> weather;
    std::vector<CalendarEvent> events;
    std::vector<GovStat> gov_stats;
    std::vector<std::string> web_signals;

    bool operator==(const EvidencePack&) const = default;
};

inline constexpr int kWeatherWeeksBack = 8;
inline constexpr int kGovMonthsBack = 6;

std::vector<DailyWeather> load_weather_csv(const std::string& path);
std::vector<DailyWeather> parse_weather_csv(const std::string& text, const std::string& source);
std::vector<CalendarEvent> load_calendar_csv(const std::string& path);
std::vector<CalendarEvent> parse_calendar_csv(const std::string& text, const std::string& source);
std::vector<GovStat> load_gov_csv(const std::string& path);
std::vector<GovStat> parse_gov_csv(const std::string& text, const std::string& source);

/// Weekly means of temperature and humidity and the weekly precipitation sum
/// over the days available in [week_start, week_start + 7). `daily` must be
/// sorted by date.
std::vector<WeatherWeekly> aggregate_weather(const std::vector<DailyWeather>& daily,
                                             const std::vector<Date>& week_grid);

/// Week starts congruent to `anchor` (mod 7) covering every daily record.
std::vector<Date> week_grid_covering(const std::vector<DailyWeather>& daily, const Date& anchor);

/// Time-aligned context for one forecast origin: the eight weekly weather
/// rows ending at the origin week, completed months of government totals up
/// to six months back, and the calendar for the origin week plus `horizon`
/// weeks ahead. Ablation flags drop whole categories.
EvidencePack build_evidence_pack(const Date& origin, int horizon_weeks,
                                 const EvidenceSources& sources, const AblationConfig& ablation);

/// Non-empty categories only, keys sorted. This is the `external_data`
/// object embedded in the interpreter prompt.
nlohmann::json external_data_json(const EvidencePack& pack);
/// external_data plus as_of_date, serialized compactly with sorted keys.
std::string canonical_json(const EvidencePack& pack);

/// Dates in the pack that a leak-free run must not contain: weather or
/// government data dated after the origin, or events beyond origin + 7h.
std::vector<std::string> audit_pack(const EvidencePack& pack, const Date& origin, int horizon_weeks);

/// Rounds to a fixed number of decimals for prompt rendering.
double round_to(double x, int decimals);

}  // namespace epicast
