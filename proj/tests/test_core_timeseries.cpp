#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "epicast/csv.hpp"
#include "epicast/date.hpp"
#include "epicast/error.hpp"
#include "epicast/series.hpp"
#include "epicast/trend.hpp"
#include "test_support.hpp"

namespace epicast {
namespace {

const Date kMonday(2024, 1, 1);

WeeklySeries series_of(const std::vector<std::int64_t>& counts) { return WeeklySeries::from_counts(kMonday, counts); }

TEST(Date, ParsesAndFormatsIso) {
    const Date d = Date::parse("2024-02-29");
    EXPECT_EQ(d.year(), 2024);
    EXPECT_EQ(d.month(), 2u);
    EXPECT_EQ(d.day(), 29u);
    EXPECT_EQ(d.iso(), "2024-02-29");
    EXPECT_EQ(d.plus_days(1).iso(), "2024-03-01");
    EXPECT_EQ(d.month_end().iso(), "2024-02-29");
    EXPECT_EQ(Date(2023, 2, 10).month_end().iso(), "2023-02-28");
}

TEST(Date, RejectsMalformedAndImpossibleDates) {
    for (const char* bad : {"2023-02-29", "2024-13-01", "2024-1-01", "24-01-01", "2024/01/01", "", "2024-01-01x"}) {
        EXPECT_THROW(Date::parse(bad), ValidationError) << bad;
    }
}

TEST(YearMonth, PreviousWrapsYear) {
    EXPECT_EQ(YearMonth::parse("2024-01").previous().iso(), "2023-12");
    EXPECT_EQ(YearMonth::parse("2024-03").last_day().iso(), "2024-03-31");
}

TEST(Csv, HandlesQuotesCrlfAndBlankLines) {
    const auto t = parse_csv("a,b\r\n1,\"x,y\"\r\n\r\n2,\"he said \"\"hi\"\"\"\r\n", {"a", "b"}, "mem");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0].fields[1], "x,y");
    EXPECT_EQ(t.rows[1].fields[1], "he said \"hi\"");
    EXPECT_EQ(t.rows[1].line, 4u);
}

TEST(Csv, RejectsWrongHeaderAndFieldCount) {
    EXPECT_THROW(parse_csv("a,c\n1,2\n", {"a", "b"}, "mem"), ValidationError);
    EXPECT_THROW(parse_csv("a,b\n1,2,3\n", {"a", "b"}, "mem"), ValidationError);
}

TEST(Csv, MissingFileNamesPath) {
    try {
        read_csv("/nonexistent/cases.csv", {"date", "cases"});
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_EQ(e.path(), "/nonexistent/cases.csv");
    }
}

TEST(WeeklySeries, EnforcesSevenDaySpacingAndNonNegativeCounts) {
    EXPECT_THROW(WeeklySeries({{Date(2024, 1, 1), 1}, {Date(2024, 1, 15), 2}}), ValidationError);
    EXPECT_THROW(WeeklySeries({{Date(2024, 1, 8), 1}, {Date(2024, 1, 1), 2}}), ValidationError);
    EXPECT_THROW(WeeklySeries({{Date(2024, 1, 1), 1}, {Date(2024, 1, 1), 2}}), ValidationError);
    EXPECT_THROW(WeeklySeries({{Date(2024, 1, 1), -1}}), ValidationError);
    EXPECT_NO_THROW(WeeklySeries({{Date(2024, 1, 1), 0}, {Date(2024, 1, 8), 3}}));
}

TEST(WeeklySeries, ParseRejectsDuplicatesGapsAndBadCounts) {
    EXPECT_THROW(parse_series_csv("date,cases\n2024-01-01,1\n2024-01-01,2\n", "mem"), ValidationError);
    EXPECT_THROW(parse_series_csv("date,cases\n2024-01-08,1\n2024-01-01,2\n", "mem"), ValidationError);
    EXPECT_THROW(parse_series_csv("date,cases\n2024-01-01,1\n2024-01-15,2\n", "mem"), ValidationError);
    EXPECT_THROW(parse_series_csv("date,cases\n2024-01-01,1.5\n", "mem"), ValidationError);
    EXPECT_THROW(parse_series_csv("date,cases\n2024-01-01,-2\n", "mem"), ValidationError);
    const auto s = parse_series_csv("date,cases\n2024-01-01,1\n2024-01-08,2\n", "mem");
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s.count(1), 2);
}

TEST(WeeklySeries, ErrorMessageCarriesSourceAndLine) {
    try {
        parse_series_csv("date,cases\n2024-01-01,1\n2024-01-08,x\n", "cases.csv");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("cases.csv:3"), std::string::npos) << e.what();
    }
}

TEST(WeeklySeries, PrefixAndWindowViews) {
    const auto s = series_of({1, 2, 3, 4, 5, 6});
    EXPECT_EQ(s.prefix(3).values(), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(s.window_ending(5, 2).values(), (std::vector<double>{4, 5}));
    EXPECT_EQ(s.window_ending(2, 8).values(), (std::vector<double>{1, 2}));
    EXPECT_EQ(s.index_of(kMonday.plus_days(14)), 2u);
    EXPECT_FALSE(s.index_of(kMonday.plus_days(3)));
    EXPECT_THROW(s.at(6), std::out_of_range);
}

TEST(HongKongFixture, LoadsNinetyPlusWeeks) {
    const auto s = load_series_csv(testing::source_path("data/hongkong/cases.csv"));
    EXPECT_GE(s.size(), 98u);
    EXPECT_EQ(s.first_date().iso(), "2022-10-31");
}

TEST(GrowthRate, Examples) {
    EXPECT_DOUBLE_EQ(growth_rate(series_of({6, 9, 12, 20, 42}), 4), 6.0);
    EXPECT_DOUBLE_EQ(growth_rate(series_of({0, 0, 0, 0, 0}), 4), 0.0);
    EXPECT_DOUBLE_EQ(growth_rate(series_of({0, 1, 2, 3, 5}), 4), 5.0);
}

TEST(GrowthRate, RangeErrors) {
    const auto s = series_of({1, 2, 3, 4, 5});
    EXPECT_THROW(growth_rate(s, 3), std::out_of_range);
    EXPECT_THROW(growth_rate(s, 5), std::out_of_range);
}

TEST(ConsecutiveGrowth, Examples) {
    EXPECT_EQ(consecutive_growth(series_of({3, 5, 8, 12}), 3), 3);
    EXPECT_EQ(consecutive_growth(series_of({5, 5}), 1), 0);
    EXPECT_EQ(consecutive_growth(series_of({9, 4, 6}), 2), 1);
    EXPECT_EQ(consecutive_growth(series_of({9}), 0), 0);
}

TEST(ConsecutiveGrowth, AppendingLargerValueIncrementsStreak) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(1, 40), val(0, 30);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int64_t> v(len(rng));
        for (auto& x : v) x = val(rng);
        const auto s = series_of(v);
        const int before = consecutive_growth(s, s.size() - 1);
        const auto grown = s.appended(v.back() + 1 + val(rng));
        EXPECT_EQ(consecutive_growth(grown, grown.size() - 1), before + 1);
    }
}

TEST(PeakStatus, Examples) {
    const auto ten = series_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    EXPECT_TRUE(peak_status(ten, 9, P90Scope::full).is_at_peak);
    EXPECT_DOUBLE_EQ(peak_status(ten, 9, P90Scope::full).p90_threshold, 9.0);
    EXPECT_FALSE(peak_status(ten, 4, P90Scope::full).is_at_peak);
    EXPECT_TRUE(peak_status(series_of({4, 4, 4, 4}), 3, P90Scope::full).is_at_peak);
}

TEST(PeakStatus, PastScopeIgnoresLaterWeeks) {
    const auto s = series_of({1, 2, 3, 4, 5, 100, 200});
    EXPECT_TRUE(peak_status(s, 4, P90Scope::past).is_at_peak);
    EXPECT_FALSE(peak_status(s, 4, P90Scope::full).is_at_peak);
}

TEST(P90, NearestRank) {
    EXPECT_DOUBLE_EQ(p90_nearest_rank(series_of({5})), 5.0);
    EXPECT_DOUBLE_EQ(p90_nearest_rank(series_of({1, 2})), 2.0);
    // ceil(0.9 * 11) = 10
    EXPECT_DOUBLE_EQ(p90_nearest_rank(series_of({11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1})), 10.0);
}

TEST(Volatility, Examples) {
    EXPECT_DOUBLE_EQ(estimate_volatility(series_of({7, 7, 7, 7, 7, 7, 7, 7}), 7).value(), 0.05);
    // Every change is +80 %.
    std::vector<std::int64_t> grow{100};
    for (int i = 0; i < 7; ++i) grow.push_back(grow.back() * 18 / 10);
    EXPECT_DOUBLE_EQ(estimate_volatility(series_of(grow), 7).value(), 0.50);
    // Alternating 10 -> 12 -> 10 ...: changes 0.2, 1/6, ... median of seven is 0.2.
    EXPECT_NEAR(estimate_volatility(series_of({10, 12, 10, 12, 10, 12, 10, 12}), 7).value(), 0.2, 1e-12);
}

TEST(Volatility, UsesOnlyTheSevenChangesOfTheLastEightWeeks) {
    // A huge jump before the window must not matter.
    const auto s = series_of({1, 1000, 10, 12, 10, 12, 10, 12, 10, 12});
    EXPECT_NEAR(estimate_volatility(s, 9).value(), 0.2, 1e-12);
}

TEST(Volatility, RobustToSingleOutlier) {
    const auto base = series_of({10, 11, 10, 11, 10, 11, 10, 11});
    const auto outlier = series_of({10, 11, 10, 11, 10, 11, 10, 500});
    EXPECT_DOUBLE_EQ(estimate_volatility(base, 7).value(), estimate_volatility(outlier, 7).value());
}

TEST(Volatility, InsufficientHistory) {
    EXPECT_THROW(estimate_volatility(series_of({3}), 0), InsufficientHistory);
    EXPECT_NO_THROW(estimate_volatility(series_of({3, 4}), 1));
}

TEST(Volatility, CustomBounds) {
    const auto s = series_of({7, 7, 7, 7});
    EXPECT_DOUBLE_EQ(estimate_volatility(s, 3, 8, {0.1, 0.3}).value(), 0.1);
    EXPECT_THROW(Volatility::clamped(0.2, {0.5, 0.1}), ValidationError);
}

TEST(Median, MidpointForEvenCounts) {
    EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(median({4, 1, 3, 2}), 2.5);
}

}  // namespace
}  // namespace epicast
