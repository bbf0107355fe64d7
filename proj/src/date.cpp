#include "epicast/date.hpp"

#include <charconv>
#include <cstdio>

#include "epicast/error.hpp"

namespace epicast {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError("malformed date '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        throw ValidationError("invalid calendar date " + std::to_string(year) + "-" +
                              std::to_string(month) + "-" + std::to_string(day));
    }
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ValidationError("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    }
    const int y = parse_int(text.substr(0, 4), text);
    const int m = parse_int(text.substr(5, 2), text);
    const int d = parse_int(text.substr(8, 2), text);
    if (m < 1 || d < 1) throw ValidationError("invalid date '" + std::string(text) + "'");
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

int Date::year() const { return int(std::chrono::year_month_day{days_}.year()); }
unsigned Date::month() const { return unsigned(std::chrono::year_month_day{days_}.month()); }
unsigned Date::day() const { return unsigned(std::chrono::year_month_day{days_}.day()); }

Date Date::month_end() const {
    std::chrono::year_month_day ymd{days_};
    std::chrono::year_month_day_last last{ymd.year(), std::chrono::month_day_last{ymd.month()}};
    return Date(std::chrono::sys_days{last});
}

YearMonth YearMonth::parse(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') {
        throw ValidationError("malformed month '" + std::string(text) + "' (expected YYYY-MM)");
    }
    const int y = parse_int(text.substr(0, 4), text);
    const int m = parse_int(text.substr(5, 2), text);
    if (m < 1 || m > 12) throw ValidationError("invalid month '" + std::string(text) + "'");
    return {y, static_cast<unsigned>(m)};
}

std::string YearMonth::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", year, month);
    return buf;
}

YearMonth YearMonth::previous() const {
    if (month == 1) return {year - 1, 12};
    return {year, month - 1};
}

}  // namespace epicast
