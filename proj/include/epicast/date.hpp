#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace epicast {

/// Calendar date with day resolution. Wraps std::chrono::sys_days so
/// arithmetic in days is exact and comparisons are cheap.
class Date {
public:
    Date() = default;
    Date(int year, unsigned month, unsigned day);
    explicit Date(std::chrono::sys_days days) : days_(days) {}

    /// Parses YYYY-MM-DD; throws ValidationError on malformed or impossible dates.
    static Date parse(std::string_view text);

    std::string iso() const;
    int year() const;
    unsigned month() const;
    unsigned day() const;

    std::chrono::sys_days sys_days() const { return days_; }
    Date plus_days(int n) const { return Date(days_ + std::chrono::days{n}); }
    int days_until(const Date& other) const {
        return static_cast<int>((other.days_ - days_).count());
    }

    /// Last day of this date's calendar month.
    Date month_end() const;

    auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

/// Calendar month (YYYY-MM).
struct YearMonth {
    int year = 1970;
    unsigned month = 1;

    static YearMonth parse(std::string_view text);
    static YearMonth of(const Date& d) { return {d.year(), d.month()}; }

    std::string iso() const;
    Date first_day() const { return Date(year, month, 1); }
    Date last_day() const { return first_day().month_end(); }
    YearMonth previous() const;

    auto operator<=>(const YearMonth&) const = default;
};

}  // namespace epicast
