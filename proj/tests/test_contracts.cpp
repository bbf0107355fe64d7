#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "epicast/contracts.hpp"
#include "epicast/error.hpp"
#include "test_support.hpp"

namespace epicast {
namespace {

using nlohmann::json;
using testing::fixture;

const char* kGoodSignal =
    R"({"transmission_impact": 0.1, "confidence": 0.5, "event_summary": "s", "risk_notes": []})";
const char* kGoodForecast = R"({"forecast_mean": [4.0], "uncertainty_scale": 0.2, "rationale": "r"})";

ChatRequest request_for(const std::string& user) {
    return make_request(LlmProviderConfig{}, Prompt{"system", user});
}

TEST(GoldenOutputs, PositiveGrowthWeek) {
    const auto s = parse_context_signal(fixture("interp_positive_growth.json"));
    ASSERT_TRUE(s) << s.error;
    EXPECT_DOUBLE_EQ(s.value->transmission_impact, 0.42);
    EXPECT_DOUBLE_EQ(s.value->confidence, 0.72);
    EXPECT_EQ(s.value->risk_notes.size(), 3u);
    EXPECT_EQ(s.value->risk_notes[1], "temperature entering 20-25C band");
    EXPECT_EQ(*s.value->lag_rationale, "growth effects expected to appear with 1-week delay");

    const auto f = parse_raw_forecast(fixture("fc_positive_growth.json"), 1);
    ASSERT_TRUE(f) << f.error;
    EXPECT_EQ(f.value->forecast_mean, std::vector<double>{11.2});
    EXPECT_DOUBLE_EQ(f.value->uncertainty_scale, 0.33);
}

TEST(GoldenOutputs, ConflictingDrivers) {
    const struct {
        const char* file;
        double impact;
        double confidence;
    } cases[] = {{"interp_school_break_a.json", -0.40, 0.63},
                 {"interp_school_break_b.json", -0.40, 0.58},
                 {"interp_school_break_c.json", -0.60, 0.80}};
    for (const auto& c : cases) {
        const auto s = parse_context_signal(fixture(c.file));
        ASSERT_TRUE(s) << c.file << ": " << s.error;
        EXPECT_DOUBLE_EQ(s.value->transmission_impact, c.impact);
        EXPECT_DOUBLE_EQ(s.value->confidence, c.confidence);
    }
}

TEST(GoldenOutputs, WinterTrough) {
    const auto s = parse_context_signal(fixture("interp_winter_trough.json"));
    ASSERT_TRUE(s);
    EXPECT_DOUBLE_EQ(s.value->transmission_impact, -0.15);
    EXPECT_DOUBLE_EQ(s.value->confidence, 0.71);
    const auto f = parse_raw_forecast(fixture("fc_winter_trough.json"), 1);
    ASSERT_TRUE(f);
    EXPECT_EQ(f.value->forecast_mean, std::vector<double>{0.2});
    EXPECT_DOUBLE_EQ(f.value->uncertainty_scale, 0.10);
}

TEST(GoldenOutputs, LocalOutbreak) {
    const auto s = parse_context_signal(fixture("interp_local_outbreak.json"));
    ASSERT_TRUE(s);
    EXPECT_DOUBLE_EQ(s.value->transmission_impact, 0.10);
    EXPECT_DOUBLE_EQ(s.value->confidence, 0.40);
    const auto f = parse_raw_forecast(fixture("fc_local_outbreak.json"), 1);
    ASSERT_TRUE(f);
    EXPECT_EQ(f.value->forecast_mean, std::vector<double>{3.5});
    EXPECT_DOUBLE_EQ(f.value->uncertainty_scale, 0.28);
}

TEST(GoldenOutputs, RawLineWrappedStringIsNotJson) {
    EXPECT_FALSE(parse_context_signal(fixture("interp_positive_growth_wrapped.txt")));
}

TEST(ContextSignalParse, Rejections) {
    const char* bad[] = {
        "",
        "null",
        "[1]",
        "```json\n{\"transmission_impact\": 0.1}\n```",
        R"({"transmission_impact": 1.5, "confidence": 0.5, "event_summary": "s", "risk_notes": []})",
        R"({"transmission_impact": -1.01, "confidence": 0.5, "event_summary": "s", "risk_notes": []})",
        R"({"transmission_impact": 0.1, "confidence": -0.1, "event_summary": "s", "risk_notes": []})",
        R"({"transmission_impact": "0.1", "confidence": 0.5, "event_summary": "s", "risk_notes": []})",
        R"({"confidence": 0.5, "event_summary": "s", "risk_notes": []})",
        R"({"transmission_impact": 0.1, "confidence": 0.5, "risk_notes": []})",
        R"({"transmission_impact": 0.1, "confidence": 0.5, "event_summary": "s", "risk_notes": "x"})",
        R"({"transmission_impact": 0.1, "confidence": 0.5, "event_summary": "s", "risk_notes": [1]})",
        R"({"transmission_impact": 0.1, "confidence": 0.5, "event_summary": "s", "risk_notes": [], "lag_rationale": 3})",
        R"({"transmission_impact": 0.1, "confidence": 0.5, "event_summary": "s", "risk_notes": []} trailing)",
        R"(Here you go: {"transmission_impact": 0.1, "confidence": 0.5, "event_summary": "s", "risk_notes": []})",
    };
    for (const char* b : bad) EXPECT_FALSE(parse_context_signal(b)) << b;
}

TEST(ContextSignalParse, BoundariesAndExtrasAccepted) {
    EXPECT_TRUE(parse_context_signal(
        R"({"transmission_impact": -1, "confidence": 0, "event_summary": "", "risk_notes": [], "extra": 1})"));
    EXPECT_TRUE(parse_context_signal(
        "  \n" R"({"transmission_impact": 1, "confidence": 1, "event_summary": "x", "risk_notes": ["a"], "lag_rationale": null})"
        "\n"));
}

TEST(RawForecastParse, Rejections) {
    const char* bad[] = {
        R"({"forecast_mean": [], "uncertainty_scale": 0.2, "rationale": "r"})",
        R"({"forecast_mean": [1, 2], "uncertainty_scale": 0.2, "rationale": "r"})",
        R"({"forecast_mean": [-0.1], "uncertainty_scale": 0.2, "rationale": "r"})",
        R"({"forecast_mean": ["1"], "uncertainty_scale": 0.2, "rationale": "r"})",
        R"({"forecast_mean": 1, "uncertainty_scale": 0.2, "rationale": "r"})",
        R"({"forecast_mean": [1], "uncertainty_scale": 1.2, "rationale": "r"})",
        R"({"forecast_mean": [1], "uncertainty_scale": -0.2, "rationale": "r"})",
        R"({"forecast_mean": [1], "rationale": "r"})",
        R"({"forecast_mean": [1], "uncertainty_scale": 0.2})",
        R"({"forecast_mean": [1], "uncertainty_scale": 0.2, "rationale": 5})",
        R"({"forecast_mean": [1], "uncertainty_scale": 0.2, "rationale": "r", "note": "x"})",
        "```\n{\"forecast_mean\": [1], \"uncertainty_scale\": 0.2, \"rationale\": \"r\"}\n```",
    };
    for (const char* b : bad) EXPECT_FALSE(parse_raw_forecast(b, 1)) << b;
    EXPECT_TRUE(parse_raw_forecast(R"({"forecast_mean": [0, 2.5], "uncertainty_scale": 1, "rationale": ""})", 2));
}

bool signal_ok(const ContextSignal& s) {
    return std::isfinite(s.transmission_impact) && s.transmission_impact >= -1 && s.transmission_impact <= 1 &&
           std::isfinite(s.confidence) && s.confidence >= 0 && s.confidence <= 1;
}

bool forecast_ok(const RawForecast& f, int h) {
    if (static_cast<int>(f.forecast_mean.size()) != h) return false;
    for (double x : f.forecast_mean) {
        if (!std::isfinite(x) || x < 0) return false;
    }
    return std::isfinite(f.uncertainty_scale) && f.uncertainty_scale >= 0 && f.uncertainty_scale <= 1;
}

TEST(ContractFuzz, AcceptedObjectsAlwaysSatisfyInvariants) {
    std::mt19937 rng(2024);
    const std::vector<json> values{json(0.0),  json(-1.0),  json(1.0),   json(1.0000001), json(-5),
                                   json(0.5),  json(1e308), json("0.5"), json(nullptr),   json::array({1.0}),
                                   json(true), json(2),     json(-0.0),  json::object(),  json::array()};
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    std::bernoulli_distribution drop(0.1), mangle(0.15);
    int accepted = 0;
    for (int i = 0; i < 1000; ++i) {
        json s = {{"transmission_impact", values[pick(rng)]},
                  {"confidence", values[pick(rng)]},
                  {"event_summary", drop(rng) ? json(3) : json("x")},
                  {"risk_notes", drop(rng) ? json("n") : json::array({"a"})}};
        json f = {{"forecast_mean", json::array({values[pick(rng)]})},
                  {"uncertainty_scale", values[pick(rng)]},
                  {"rationale", "r"}};
        if (drop(rng)) s.erase("confidence");
        if (drop(rng)) f.erase("uncertainty_scale");
        std::string st = s.dump(), ft = f.dump();
        if (mangle(rng)) st = st.substr(0, st.size() / 2);
        if (mangle(rng)) ft = "```json\n" + ft + "\n```";
        if (const auto r = parse_context_signal(st)) {
            ++accepted;
            EXPECT_TRUE(signal_ok(*r.value)) << st;
        }
        if (const auto r = parse_raw_forecast(ft, 1)) {
            ++accepted;
            EXPECT_TRUE(forecast_ok(*r.value, 1)) << ft;
        }
    }
    EXPECT_GT(accepted, 0);
}

TEST(Retry, SecondAttemptRecoversWithIdenticalRequest) {
    MockProvider p;
    p.script_any({"not json", kGoodSignal});
    const auto req = request_for("payload");
    const auto r = interpret(p, req);
    ASSERT_TRUE(r.valid());
    EXPECT_EQ(r.attempts, 2);
    EXPECT_EQ(r.errors.size(), 1u);
    const auto seen = p.seen_hashes();
    ASSERT_EQ(seen.size(), 2u);
    EXPECT_EQ(seen[0], seen[1]);
    EXPECT_EQ(seen[0], req.prompt.hash());
}

TEST(Retry, TwoFailuresMarkInvalidWithoutThrowing) {
    MockProvider p;
    p.script_any({"```{}```", R"({"forecast_mean": [1, 2], "uncertainty_scale": 0.2, "rationale": "r"})"});
    const auto r = generate_raw_forecast(p, request_for("x"), 1);
    EXPECT_FALSE(r.valid());
    EXPECT_EQ(r.attempts, 2);
    EXPECT_EQ(p.calls(), 2u);
}

TEST(Retry, NeverMoreThanTwoAttempts) {
    MockProvider p;
    p.script_any({"bad", "bad", kGoodForecast});
    EXPECT_FALSE(generate_raw_forecast(p, request_for("x"), 1).valid());
    EXPECT_EQ(p.calls(), 2u);
}

TEST(Retry, TransportThenSuccess) {
    int calls = 0;
    MockProvider p([&](const ChatRequest&) -> std::string {
        if (++calls == 1) throw TransportError("connection reset");
        return kGoodForecast;
    });
    const auto r = generate_raw_forecast(p, request_for("x"), 1);
    ASSERT_TRUE(r.valid());
    EXPECT_EQ(r.attempts, 2);
}

TEST(Retry, PersistentTransportFailurePropagates) {
    MockProvider p([](const ChatRequest&) -> std::string { throw TransportError("refused"); });
    EXPECT_THROW(interpret(p, request_for("x")), TransportError);
    EXPECT_EQ(p.calls(), 2u);
}

TEST(Retry, ContractFailureThenTransportFailurePropagates) {
    int calls = 0;
    MockProvider p([&](const ChatRequest&) -> std::string {
        if (++calls == 1) return "garbage";
        throw TransportError("refused");
    });
    EXPECT_THROW(interpret(p, request_for("x")), TransportError);
}

TEST(NeutralSignal, IsZeroImpactZeroConfidence) {
    const auto n = ContextSignal::neutral();
    EXPECT_EQ(n.transmission_impact, 0.0);
    EXPECT_EQ(n.confidence, 0.0);
    EXPECT_TRUE(n.risk_notes.empty());
}

}  // namespace
}  // namespace epicast
