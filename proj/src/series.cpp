#include "epicast/series.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "epicast/csv.hpp"
#include "epicast/error.hpp"

namespace epicast {

WeeklySeries::WeeklySeries(std::vector<WeeklyCount> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].count < 0) {
            throw ValidationError("negative count " + std::to_string(entries_[i].count) + " at " +
                                  entries_[i].week_start.iso());
        }
        if (i == 0) continue;
        const int gap = entries_[i - 1].week_start.days_until(entries_[i].week_start);
        if (gap <= 0) {
            throw ValidationError("week " + entries_[i].week_start.iso() +
                                  (gap == 0 ? " is duplicated" : " is out of order"));
        }
        if (gap != 7) {
            throw ValidationError("weeks " + entries_[i - 1].week_start.iso() + " and " +
                                  entries_[i].week_start.iso() + " are " + std::to_string(gap) +
                                  " days apart (expected 7)");
        }
    }
}

WeeklySeries WeeklySeries::from_counts(Date first, const std::vector<std::int64_t>& counts) {
    std::vector<WeeklyCount> e;
    e.reserve(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        e.push_back({first.plus_days(static_cast<int>(7 * i)), counts[i]});
    }
    return WeeklySeries(std::move(e));
}

const WeeklyCount& WeeklySeries::at(std::size_t i) const {
    if (i >= entries_.size()) {
        throw std::out_of_range("series index " + std::to_string(i) + " beyond length " +
                                std::to_string(entries_.size()));
    }
    return entries_[i];
}

std::vector<double> WeeklySeries::values() const {
    std::vector<double> v;
    v.reserve(entries_.size());
    for (const auto& e : entries_) v.push_back(static_cast<double>(e.count));
    return v;
}

std::optional<std::size_t> WeeklySeries::index_of(const Date& d) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), d,
                               [](const WeeklyCount& e, const Date& x) { return e.week_start < x; });
    if (it == entries_.end() || it->week_start != d) return std::nullopt;
    return static_cast<std::size_t>(it - entries_.begin());
}

WeeklySeries WeeklySeries::prefix(std::size_t end) const {
    end = std::min(end, entries_.size());
    WeeklySeries out;
    out.entries_.assign(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

WeeklySeries WeeklySeries::window_ending(std::size_t end, std::size_t n) const {
    end = std::min(end, entries_.size());
    const std::size_t begin = end > n ? end - n : 0;
    WeeklySeries out;
    out.entries_.assign(entries_.begin() + static_cast<std::ptrdiff_t>(begin),
                        entries_.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

WeeklySeries WeeklySeries::appended(std::int64_t next_count) const {
    auto e = entries_;
    const Date next = e.empty() ? Date(1970, 1, 5) : e.back().week_start.plus_days(7);
    e.push_back({next, next_count});
    return WeeklySeries(std::move(e));
}

WeeklySeries parse_series_csv(const std::string& text, const std::string& source_name) {
    const auto table = parse_csv(text, {"date", "cases"}, source_name);
    std::vector<WeeklyCount> entries;
    entries.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const std::string where = source_name + ":" + std::to_string(row.line);
        Date d;
        try {
            d = Date::parse(row.fields[0]);
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
        const std::string& c = row.fields[1];
        std::int64_t count = 0;
        auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
        if (c.empty() || ec != std::errc{} || ptr != c.data() + c.size()) {
            throw ValidationError(where + ": cases '" + c + "' is not an integer");
        }
        entries.push_back({d, count});
    }
    try {
        return WeeklySeries(std::move(entries));
    } catch (const ValidationError& e) {
        throw ValidationError(source_name + ": " + e.what());
    }
}

WeeklySeries load_series_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open series file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_series_csv(ss.str(), path);
}

}  // namespace epicast
