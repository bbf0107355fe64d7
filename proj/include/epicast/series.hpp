#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epicast/date.hpp"

namespace epicast {

struct WeeklyCount {
    Date week_start;
    std::int64_t count = 0;

    bool operator==(const WeeklyCount&) const = default;
};

/// Ordered weekly case counts. Construction enforces that week starts are
/// strictly increasing and exactly seven days apart and that counts are
/// non-negative, so every instance is gap-free.
class WeeklySeries {
public:
    WeeklySeries() = default;
    explicit WeeklySeries(std::vector<WeeklyCount> entries);

    /// Convenience for tests: consecutive weeks starting at `first`.
    static WeeklySeries from_counts(Date first, const std::vector<std::int64_t>& counts);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const WeeklyCount& operator[](std::size_t i) const { return entries_[i]; }
    const WeeklyCount& at(std::size_t i) const;
    std::span<const WeeklyCount> entries() const { return entries_; }
    const Date& first_date() const { return entries_.front().week_start; }
    const Date& last_date() const { return entries_.back().week_start; }

    std::int64_t count(std::size_t i) const { return at(i).count; }
    std::vector<double> values() const;

    /// Index of the week starting on `d`, if present.
    std::optional<std::size_t> index_of(const Date& d) const;

    /// Entries [0, end): the training slice when end = origin index + 1.
    WeeklySeries prefix(std::size_t end) const;
    /// The last `n` entries of prefix(end) (fewer if not available).
    WeeklySeries window_ending(std::size_t end, std::size_t n) const;

    WeeklySeries appended(std::int64_t next_count) const;

    bool operator==(const WeeklySeries&) const = default;

private:
    std::vector<WeeklyCount> entries_;
};

/// Loads `date,cases` CSV. Rejects duplicated, out-of-order or gapped weeks,
/// negative or non-integer counts.
WeeklySeries load_series_csv(const std::string& path);
WeeklySeries parse_series_csv(const std::string& text, const std::string& source_name);

}  // namespace epicast
