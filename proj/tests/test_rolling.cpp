#include <gtest/gtest.h>

#include <json.hpp>
#include <mutex>

#include "epicast/config.hpp"
#include "epicast/contracts.hpp"
#include "epicast/dataset.hpp"
#include "epicast/error.hpp"
#include "epicast/prompts.hpp"
#include "epicast/report.hpp"
#include "epicast/rolling.hpp"
#include "epicast/transcripts.hpp"
#include "test_support.hpp"

namespace epicast {
namespace {

struct HongKong {
    RunConfig config = load_config(testing::source_path("configs/hongkong.json"));
    Dataset data = load_dataset(config);
    std::vector<Date> origins = select_origins(data.series, *config.eval_start, *config.eval_end, 1,
                                               config.constants.recent_window, config.constants.horizon);

    RollingOptions options() const {
        RollingOptions o;
        o.ablation = config.ablation;
        o.concurrency = 1;
        return o;
    }

    RollingResult run(LlmProvider& interp, LlmProvider& fc, const RollingOptions& o) const {
        const PipelineContext ctx{data.series, data.sources, *data.index, *data.embedder, interp, fc,
                                  config.interpreter, config.forecaster};
        return run_rolling(ctx, origins, o);
    }

    RollingResult run_momentum(const RollingOptions& o) const {
        MockProvider interp(make_mock_generator("momentum", AgentRole::interpreter));
        MockProvider fc(make_mock_generator("momentum", AgentRole::forecaster));
        return run(interp, fc, o);
    }
};

TEST(SelectOrigins, HongKongWindowHasNinetyOrigins) {
    HongKong hk;
    ASSERT_EQ(hk.origins.size(), 90u);
    EXPECT_EQ(hk.origins.front().iso(), "2023-01-09");
    EXPECT_EQ(hk.origins.back().iso(), "2024-09-23");
}

TEST(SelectOrigins, EveryNAndHistoryLimits) {
    const auto s = WeeklySeries::from_counts(Date(2024, 1, 1), std::vector<std::int64_t>(20, 3));
    const auto all = select_origins(s, s.first_date(), s.last_date(), 1, 8, 1);
    EXPECT_EQ(all.size(), 12u);  // indices 7..18
    EXPECT_EQ(all.front(), s[7].week_start);
    const auto every3 = select_origins(s, s[7].week_start, s.last_date(), 3, 8, 1);
    EXPECT_EQ(every3.size(), 4u);
    EXPECT_THROW(select_origins(s, s.first_date(), s[3].week_start, 1, 8, 1), ValidationError);
    EXPECT_THROW(select_origins(s, s.last_date(), s.first_date(), 1, 8, 1), ValidationError);
}

TEST(RunRolling, RejectsOriginsWithoutEnoughHistory) {
    HongKong hk;
    MockProvider p;
    hk.origins = {hk.data.series[3].week_start};
    EXPECT_THROW(hk.run(p, p, hk.options()), InsufficientHistory);
    hk.origins = {hk.data.series.last_date()};
    EXPECT_THROW(hk.run(p, p, hk.options()), InsufficientHistory);
    hk.origins = {Date(2023, 1, 10)};
    EXPECT_THROW(hk.run(p, p, hk.options()), ValidationError);
}

TEST(RunRolling, MomentumMockCompletesEveryOrigin) {
    HongKong hk;
    const auto result = hk.run_momentum(hk.options());
    ASSERT_EQ(result.records.size(), 90u);
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const auto& r = result.records[i];
        EXPECT_TRUE(r.ok());
        EXPECT_EQ(r.origin_date, hk.origins[i]);
        EXPECT_EQ(r.y_true, hk.data.series[*hk.data.series.index_of(r.origin_date) + 1].count);
        EXPECT_LE(r.q05, r.q50);
        EXPECT_LE(r.q50, r.q95);
        EXPECT_GE(r.volatility, 0.05);
        EXPECT_LE(r.volatility, 0.50);
    }
    const auto s = summarize(result.records);
    EXPECT_EQ(s.n_excluded, 0);
    EXPECT_GE(s.rmse, s.mae);
}

TEST(RunRolling, ConcurrencyPreservesOriginOrderAndBytes) {
    HongKong hk;
    auto o = hk.options();
    const auto serial = hk.run_momentum(o);
    o.concurrency = 8;
    const auto parallel = hk.run_momentum(o);
    EXPECT_EQ(records_csv(serial.records, "h"), records_csv(parallel.records, "h"));
}

TEST(RunRolling, DoubleContractFailureExcludesOnlyThatOrigin) {
    HongKong hk;
    hk.origins.resize(5);
    MockProvider interp(make_mock_generator("momentum", AgentRole::interpreter));
    MockProvider fc(make_mock_generator("momentum", AgentRole::forecaster));

    // Find the forecaster prompt of the third origin, then script two bad replies for it.
    std::string target;
    auto o = hk.options();
    o.on_prompt = [&](const Date& origin, AgentRole role, const Prompt& p) {
        if (origin == hk.origins[2] && role == AgentRole::forecaster) target = p.hash();
    };
    hk.run(interp, fc, o);
    ASSERT_FALSE(target.empty());
    fc.script(target, {"```json {}```", "{\"forecast_mean\": [-1], \"uncertainty_scale\": 0.1, \"rationale\": \"\"}"});

    const auto result = hk.run(interp, fc, hk.options());
    ASSERT_EQ(result.records.size(), 5u);
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(result.records[i].ok(), i != 2) << i;
    }
    EXPECT_EQ(result.records[2].forecaster_attempts, 2);
    const auto s = summarize(result.records);
    EXPECT_EQ(s.n_origins + s.n_excluded, 5);
    EXPECT_EQ(s.n_excluded, 1);
}

TEST(RunRolling, TransportFailureAbortsTheRun) {
    HongKong hk;
    hk.origins.resize(3);
    MockProvider dead;
    MockProvider fc(make_mock_generator("momentum", AgentRole::forecaster));
    EXPECT_THROW(hk.run(dead, fc, hk.options()), TransportError);
}

TEST(RunRolling, NoAgent1NeverCallsInterpreter) {
    HongKong hk;
    hk.origins.resize(10);
    MockProvider interp;
    MockProvider fc(make_mock_generator("momentum", AgentRole::forecaster));
    auto o = hk.options();
    o.ablation.no_agent1 = true;
    const auto result = hk.run(interp, fc, o);
    EXPECT_EQ(interp.calls(), 0u);
    for (const auto& r : result.records) {
        EXPECT_TRUE(r.ok());
        EXPECT_EQ(r.impact, 0.0);
        EXPECT_EQ(r.confidence, 0.0);
    }
}

TEST(RunRolling, AuditIsCleanForEveryOrigin) {
    HongKong hk;
    const auto result = hk.run_momentum(hk.options());
    ASSERT_EQ(result.audits.size(), 90u);
    for (const auto& a : result.audits) {
        EXPECT_TRUE(a.clean()) << a.origin.iso();
        EXPECT_LE(a.latest_series_week, a.origin);
        EXPECT_LE(a.latest_weather_week, a.origin);
        EXPECT_LE(a.latest_gov_month_end, a.origin);
        EXPECT_LE(a.latest_event_week, a.origin.plus_days(7));
    }
}

TEST(RunRolling, FullScopePercentileIsReportedAsLookahead) {
    HongKong hk;
    hk.origins.resize(2);
    auto o = hk.options();
    o.ablation.p90_scope = P90Scope::full;
    EXPECT_THROW(hk.run_momentum(o), LeakError);
    o.enforce_leak_audit = false;
    const auto result = hk.run_momentum(o);
    EXPECT_FALSE(result.audits[0].clean());
}

TEST(RunRolling, PromptsOnlySeeDataUpToOrigin) {
    HongKong hk;
    hk.origins.resize(20);
    std::mutex mu;
    std::vector<std::pair<Date, std::string>> prompts;
    auto o = hk.options();
    o.concurrency = 4;
    o.on_prompt = [&](const Date& origin, AgentRole role, const Prompt& p) {
        std::lock_guard lock(mu);
        if (role == AgentRole::forecaster) prompts.emplace_back(origin, p.user);
    };
    hk.run_momentum(o);
    ASSERT_EQ(prompts.size(), 20u);
    for (const auto& [origin, user] : prompts) {
        const auto j = nlohmann::json::parse(user);
        EXPECT_EQ(j["full_history"]["dates"].back(), origin.iso());
        for (const auto& d : j["full_history"]["dates"]) EXPECT_LE(Date::parse(d.get<std::string>()), origin);
    }
}


struct CapturedPrompts {
    std::mutex mu;
    std::vector<Prompt> interpreter;
    std::vector<Prompt> forecaster;
    void hook(RollingOptions& o) {
        o.on_prompt = [this](const Date&, AgentRole role, const Prompt& p) {
            std::lock_guard lock(mu);
            (role == AgentRole::interpreter ? interpreter : forecaster).push_back(p);
        };
    }
};

void capture(const HongKong& hk, const std::string& flags, CapturedPrompts& c) {
    auto o = hk.options();
    o.ablation = AblationConfig::from_flags(flags);
    c.hook(o);
    hk.run_momentum(o);
}

bool contains(const std::string& s, std::string_view needle) { return s.find(needle) != std::string::npos; }

class Ablation : public ::testing::Test {
protected:
    void SetUp() override { hk.origins.resize(6); }
    HongKong hk;
};

TEST_F(Ablation, FullSystemCarriesEveryChannel) {
    CapturedPrompts c;
    capture(hk, "", c);
    ASSERT_EQ(c.interpreter.size(), 6u);
    for (const auto& p : c.interpreter) {
        EXPECT_TRUE(contains(p.system, kPassagesHeader));
        EXPECT_TRUE(contains(p.user, "\"weather\":"));
        EXPECT_TRUE(contains(p.user, "\"events\":"));
        EXPECT_TRUE(contains(p.user, "\"gov_stats\":"));
    }
}

TEST_F(Ablation, NoAgent1SendsNeutralSignalToForecaster) {
    CapturedPrompts c;
    capture(hk, "no-agent1", c);
    EXPECT_TRUE(c.interpreter.empty());
    ASSERT_EQ(c.forecaster.size(), 6u);
    for (const auto& p : c.forecaster) {
        const auto j = nlohmann::json::parse(p.user);
        EXPECT_EQ(j["transmission_impact"].get<double>(), 0.0);
        EXPECT_EQ(j["confidence"].get<double>(), 0.0);
    }
}

TEST_F(Ablation, NoClimateDropsOnlyWeather) {
    CapturedPrompts c;
    capture(hk, "no-climate", c);
    ASSERT_EQ(c.interpreter.size(), 6u);
    for (const auto& p : c.interpreter) {
        EXPECT_FALSE(contains(p.user, "\"weather\":"));
        EXPECT_TRUE(contains(p.user, "\"events\":"));
        EXPECT_TRUE(contains(p.system, kPassagesHeader));
    }
}

TEST_F(Ablation, NoRagDropsOnlyPassages) {
    CapturedPrompts c;
    capture(hk, "no-rag", c);
    ASSERT_EQ(c.interpreter.size(), 6u);
    for (const auto& p : c.interpreter) {
        EXPECT_FALSE(contains(p.system, kPassagesHeader));
        EXPECT_TRUE(contains(p.user, "\"weather\":"));
        EXPECT_TRUE(contains(p.user, "\"events\":"));
    }
}

TEST_F(Ablation, NoSchoolEventDropsOnlyEvents) {
    CapturedPrompts c;
    capture(hk, "no-school-event", c);
    ASSERT_EQ(c.interpreter.size(), 6u);
    for (const auto& p : c.interpreter) {
        EXPECT_FALSE(contains(p.user, "\"events\":"));
        EXPECT_TRUE(contains(p.user, "\"weather\":"));
        EXPECT_TRUE(contains(p.system, kPassagesHeader));
    }
}

TEST(RecordReplay, ReplayReproducesRecordedRunByteForByte) {
    HongKong hk;
    hk.origins.resize(12);
    testing::TempDir dir;
    const auto store_i = std::make_shared<TranscriptStore>(dir.path() + "/interp.jsonl");
    const auto store_f = std::make_shared<TranscriptStore>(dir.path() + "/fc.jsonl");
    RecordingProvider interp(std::make_shared<MockProvider>(make_mock_generator("momentum", AgentRole::interpreter)),
                             store_i);
    RecordingProvider fc(std::make_shared<MockProvider>(make_mock_generator("momentum", AgentRole::forecaster)),
                         store_f);
    auto o = hk.options();
    o.concurrency = 4;
    const auto recorded = hk.run(interp, fc, o);

    ReplayProvider replay_i(load_transcripts(store_i->path()));
    ReplayProvider replay_f(load_transcripts(store_f->path()));
    const auto replayed = hk.run(replay_i, replay_f, hk.options());
    EXPECT_EQ(records_csv(recorded.records, "h"), records_csv(replayed.records, "h"));

    // A replay with an unrecorded request fails instead of inventing a reply.
    hk.origins = {hk.data.series[60].week_start};
    ReplayProvider again_i(load_transcripts(store_i->path()));
    ReplayProvider again_f(load_transcripts(store_f->path()));
    EXPECT_THROW(hk.run(again_i, again_f, hk.options()), TransportError);
}

}  // namespace
}  // namespace epicast
