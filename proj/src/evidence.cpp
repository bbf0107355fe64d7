#include "epicast/evidence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "epicast/csv.hpp"
#include "epicast/error.hpp"

namespace epicast {

using nlohmann::json;

std::string to_string(SchoolStatus s) {
    switch (s) {
        case SchoolStatus::in_session: return "in_session";
        case SchoolStatus::summer_break: return "summer_break";
        case SchoolStatus::winter_break: return "winter_break";
    }
    return "in_session";
}

SchoolStatus parse_school_status(const std::string& s) {
    if (s == "in_session") return SchoolStatus::in_session;
    if (s == "summer_break") return SchoolStatus::summer_break;
    if (s == "winter_break") return SchoolStatus::winter_break;
    throw ValidationError("unknown school_status '" + s + "'");
}

AblationConfig AblationConfig::from_flags(const std::string& csv) { return from_flags(csv, AblationConfig{}); }

AblationConfig AblationConfig::from_flags(const std::string& csv, AblationConfig base) {
    std::stringstream ss(csv);
    std::string flag;
    while (std::getline(ss, flag, ',')) {
        flag.erase(0, flag.find_first_not_of(" \t"));
        flag.erase(flag.find_last_not_of(" \t") + 1);
        if (flag.empty()) continue;
        if (flag == "no-agent1") base.no_agent1 = true;
        else if (flag == "no-climate") base.no_climate = true;
        else if (flag == "no-rag") base.no_rag = true;
        else if (flag == "no-school-event") base.no_school_event = true;
        else throw ValidationError("unknown ablation flag '" + flag + "'");
    }
    return base;
}

std::string AblationConfig::flags() const {
    std::vector<std::string> f;
    if (no_agent1) f.push_back("no-agent1");
    if (no_climate) f.push_back("no-climate");
    if (no_rag) f.push_back("no-rag");
    if (no_school_event) f.push_back("no-school-event");
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
    return out;
}

double round_to(double x, int decimals) {
    const double scale = std::pow(10.0, decimals);
    double r = std::round(x * scale) / scale;
    return r == 0.0 ? 0.0 : r;  // no "-0.0" in prompts
}

namespace {

std::optional<double> parse_optional_double(const std::string& cell, const std::string& where) {
    std::string s = cell;
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    if (s.empty()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ValidationError(where + ": '" + cell + "' is not a number");
    }
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T>
T with_location(const std::string& where, auto&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

}  // namespace

std::vector<DailyWeather> parse_weather_csv(const std::string& text, const std::string& source) {
    const auto table = parse_csv(text, {"date", "temp_c", "humidity_pct", "precip_mm"}, source);
    std::vector<DailyWeather> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const std::string where = source + ":" + std::to_string(row.line);
        DailyWeather d;
        d.date = with_location<Date>(where, [&] { return Date::parse(row.fields[0]); });
        d.temp_c = parse_optional_double(row.fields[1], where);
        d.humidity_pct = parse_optional_double(row.fields[2], where);
        d.precip_mm = parse_optional_double(row.fields[3], where);
        if (d.humidity_pct && (*d.humidity_pct < 0.0 || *d.humidity_pct > 100.0)) {
            throw ValidationError(where + ": humidity outside [0, 100]");
        }
        if (d.precip_mm && *d.precip_mm < 0.0) {
            throw ValidationError(where + ": negative precipitation");
        }
        if (!out.empty() && !(out.back().date < d.date)) {
            throw ValidationError(where + ": dates must be strictly increasing");
        }
        out.push_back(d);
    }
    return out;
}

std::vector<DailyWeather> load_weather_csv(const std::string& path) {
    return parse_weather_csv(slurp(path), path);
}

std::vector<CalendarEvent> parse_calendar_csv(const std::string& text, const std::string& source) {
    const auto table = parse_csv(text, {"week_start", "school_status", "holidays"}, source);
    std::vector<CalendarEvent> out;
    for (const auto& row : table.rows) {
        const std::string where = source + ":" + std::to_string(row.line);
        CalendarEvent ev;
        ev.week_start = with_location<Date>(where, [&] { return Date::parse(row.fields[0]); });
        ev.school_status =
            with_location<SchoolStatus>(where, [&] { return parse_school_status(row.fields[1]); });
        std::stringstream ss(row.fields[2]);
        std::string h;
        while (std::getline(ss, h, ';')) {
            h.erase(0, h.find_first_not_of(" \t"));
            h.erase(h.find_last_not_of(" \t") + 1);
            if (!h.empty()) ev.holidays.push_back(h);
        }
        if (!out.empty() && !(out.back().week_start < ev.week_start)) {
            throw ValidationError(where + ": duplicated or out-of-order week " + row.fields[0]);
        }
        out.push_back(std::move(ev));
    }
    return out;
}

std::vector<CalendarEvent> load_calendar_csv(const std::string& path) {
    return parse_calendar_csv(slurp(path), path);
}

std::vector<GovStat> parse_gov_csv(const std::string& text, const std::string& source) {
    const auto table = parse_csv(text, {"month", "region", "total_cases"}, source);
    std::map<std::pair<YearMonth, std::string>, std::int64_t> totals;
    for (const auto& row : table.rows) {
        const std::string where = source + ":" + std::to_string(row.line);
        const auto period =
            with_location<YearMonth>(where, [&] { return YearMonth::parse(row.fields[0]); });
        const std::string& c = row.fields[2];
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
        if (c.empty() || ec != std::errc{} || ptr != c.data() + c.size() || v < 0) {
            throw ValidationError(where + ": total_cases '" + c + "' is not a non-negative integer");
        }
        if (!totals.emplace(std::make_pair(period, row.fields[1]), v).second) {
            throw ValidationError(where + ": duplicated month " + row.fields[0] + " for region " +
                                  row.fields[1]);
        }
    }
    std::vector<GovStat> out;
    out.reserve(totals.size());
    for (const auto& [key, total] : totals) {
        GovStat g{key.first, key.second, total, std::nullopt};
        auto prev = totals.find({key.first.previous(), key.second});
        if (prev != totals.end()) {
            g.mom_growth = (static_cast<double>(total) - static_cast<double>(prev->second)) /
                           std::max(1.0, static_cast<double>(prev->second));
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<GovStat> load_gov_csv(const std::string& path) { return parse_gov_csv(slurp(path), path); }

std::vector<Date> week_grid_covering(const std::vector<DailyWeather>& daily, const Date& anchor) {
    if (daily.empty()) return {};
    const int offset = ((anchor.days_until(daily.front().date) % 7) + 7) % 7;
    std::vector<Date> grid;
    for (Date w = daily.front().date.plus_days(-offset); w <= daily.back().date; w = w.plus_days(7)) {
        grid.push_back(w);
    }
    return grid;
}

std::vector<WeatherWeekly> aggregate_weather(const std::vector<DailyWeather>& daily,
                                             const std::vector<Date>& week_grid) {
    std::vector<WeatherWeekly> out;
    out.reserve(week_grid.size());
    for (const Date& week : week_grid) {
        const Date end = week.plus_days(7);
        auto lo = std::lower_bound(daily.begin(), daily.end(), week,
                                   [](const DailyWeather& d, const Date& x) { return d.date < x; });
        double temp_sum = 0, hum_sum = 0, rain_sum = 0;
        int temp_n = 0, hum_n = 0, rain_n = 0;
        for (auto it = lo; it != daily.end() && it->date < end; ++it) {
            if (it->temp_c) { temp_sum += *it->temp_c; ++temp_n; }
            if (it->humidity_pct) { hum_sum += *it->humidity_pct; ++hum_n; }
            if (it->precip_mm) { rain_sum += *it->precip_mm; ++rain_n; }
        }
        WeatherWeekly w{week, std::nullopt, std::nullopt, std::nullopt};
        if (temp_n) w.mean_temp_c = temp_sum / temp_n;
        if (hum_n) w.mean_humidity_pct = hum_sum / hum_n;
        if (rain_n) w.total_precip_mm = rain_sum;
        out.push_back(w);
    }
    return out;
}

EvidencePack build_evidence_pack(const Date& origin, int horizon_weeks,
                                 const EvidenceSources& sources, const AblationConfig& ablation) {
    EvidencePack pack;
    pack.as_of_date = origin;

    if (!ablation.no_climate) {
        const Date earliest = origin.plus_days(-7 * (kWeatherWeeksBack - 1));
        for (const auto& w : sources.weather) {
            if (w.week_start >= earliest && w.week_start <= origin) pack.weather.push_back(w);
        }
    }

    if (!ablation.no_school_event) {
        const Date last = origin.plus_days(7 * horizon_weeks);
        for (const auto& ev : sources.calendar) {
            if (ev.week_start >= origin && ev.week_start <= last) pack.events.push_back(ev);
        }
    }

    // Only months that have ended by the origin are known at the origin.
    YearMonth latest = YearMonth::of(origin);
    if (origin != origin.month_end()) latest = latest.previous();
    YearMonth oldest = latest;
    for (int i = 1; i < kGovMonthsBack; ++i) oldest = oldest.previous();
    for (const auto& g : sources.gov) {
        if (!sources.region.empty() && g.region != sources.region) continue;
        if (g.period >= oldest && g.period <= latest) pack.gov_stats.push_back(g);
    }

    if (sources.web) pack.web_signals = sources.web->fetch(origin, sources.region);
    return pack;
}

namespace {

json weather_json(const WeatherWeekly& w) {
    json j = json::object();
    j["week_start"] = w.week_start.iso();
    if (w.mean_temp_c) j["temp_c"] = round_to(*w.mean_temp_c, 1);
    if (w.mean_humidity_pct) j["humidity_pct"] = round_to(*w.mean_humidity_pct, 1);
    if (w.total_precip_mm) j["precip_mm"] = round_to(*w.total_precip_mm, 1);
    return j;
}

}  // namespace

json external_data_json(const EvidencePack& pack) {
    json j = json::object();
    if (!pack.weather.empty()) {
        json arr = json::array();
        for (const auto& w : pack.weather) arr.push_back(weather_json(w));
        j["weather"] = std::move(arr);
    }
    if (!pack.events.empty()) {
        json arr = json::array();
        for (const auto& ev : pack.events) {
            arr.push_back({{"week_start", ev.week_start.iso()},
                           {"school_status", to_string(ev.school_status)},
                           {"holidays", ev.holidays}});
        }
        j["events"] = std::move(arr);
    }
    if (!pack.gov_stats.empty()) {
        json arr = json::array();
        for (const auto& g : pack.gov_stats) {
            json row = {{"month", g.period.iso()}, {"region", g.region}, {"total_cases", g.total_cases}};
            if (g.mom_growth) row["mom_growth"] = round_to(*g.mom_growth, 3);
            arr.push_back(std::move(row));
        }
        j["gov_stats"] = std::move(arr);
    }
    if (!pack.web_signals.empty()) j["web_signals"] = pack.web_signals;
    return j;
}

std::string canonical_json(const EvidencePack& pack) {
    json j = external_data_json(pack);
    j["as_of_date"] = pack.as_of_date.iso();
    return j.dump();
}

std::vector<std::string> audit_pack(const EvidencePack& pack, const Date& origin, int horizon_weeks) {
    std::vector<std::string> v;
    for (const auto& w : pack.weather) {
        if (w.week_start > origin) v.push_back("weather week " + w.week_start.iso() + " after origin");
    }
    for (const auto& g : pack.gov_stats) {
        if (g.period.last_day() > origin) v.push_back("gov month " + g.period.iso() + " not complete at origin");
    }
    const Date last = origin.plus_days(7 * horizon_weeks);
    for (const auto& ev : pack.events) {
        if (ev.week_start > last) v.push_back("event week " + ev.week_start.iso() + " beyond horizon");
    }
    return v;
}

}  // namespace epicast
