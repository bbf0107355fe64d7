#include "epicast/prompts.hpp"

#include "epicast/error.hpp"

namespace epicast {

using nlohmann::json;

const std::string_view kInterpreterSystemPrompt = R"(You are an infectious-disease analyst translating qualitative context
into HFMD transmission signals.

IMPORTANT LAG POLICY:
- HFMD (Hand-Foot-Mouth Disease) typically shows a 1-week delay between
  behavioral/environmental shifts and reported cases (incubation + reporting).
- The transmission_impact you emit must describe the expected net effect starting
  next week (t+1) and the few weeks after, not primarily the current week.

INPUT JSON FIELDS:
- disease, date, horizon_weeks, impact_lag_weeks (usually 1 for HFMD).
- recent_values (ordered old->new) and derived weekly trend statistics.
- external_data: school calendars, weather summaries, news, government bulletins.
- recent qualitative notes / risk flags if available.

OUTPUT STRICT JSON (no markdown):
{
  "transmission_impact": float in [-1, 1],
  "confidence": float in [0, 1],
  "event_summary": "short natural-language summary",
  "risk_notes": ["zero or more short bullet strings"],
  "lag_rationale": "optional additional note about lag/lead timing"
}

GUIDANCE:
1. Treat school status as the strongest driver, followed by temperature/humidity,
   then other news. Weather alone without schools rarely drives large shifts.
2. transmission_impact > 0 implies conditions that are likely to increase cases
   starting next week; < 0 implies headwinds. Reserve |impact| > 0.6 for
   strongly aligned signals.
3. Mention lag explicitly in your summary when possible (e.g., "school reopening
   may lift cases from next week onward").
4. Be concise; do not restate the full payload.
)";

// The published text of item 2 is cut after "20-40"; the closing words are ours.
const std::string_view kHfmdKnowledgePrompt = R"(HAND-FOOT-MOUTH DISEASE (HFMD) - KEY EPIDEMIOLOGICAL PATTERNS:

1. SEASONALITY
   - Primary peak: late spring to early summer (roughly May-Jul).
   - Secondary smaller peak: early autumn (roughly Sep-Oct).
   - Winter (roughly Dec-Feb) is usually a low-activity period with near-zero baseline.

2. ROLE OF SCHOOLS
   - Young children in schools and kindergartens are major drivers of transmission.
   - When schools are open and conditions are favorable, cases can rise quickly.
   - Summer/winter vacations or prolonged closures often lead to rapid declines
     (e.g., 20-40% lower).

3. ENVIRONMENTAL CONDITIONS
   - Temperatures around 20-30C with adequate humidity favor transmission.
   - Very cold or very hot conditions make sustained outbreaks less likely.
   - Heavy or prolonged rainfall can temporarily reduce contact patterns.

4. EPIDEMIC CURVE SHAPE
   - Growth: fast increases during favorable conditions and active school terms.
   - Peak: seasonal maxima are usually not sustained plateaus; peaks often last 1-2 weeks.
   - Decline: post-peak declines are often relatively rapid compared to off-season noise.

5. FORECASTING IMPLICATIONS
   - Large sudden spikes during winter are less plausible without extraordinary drivers.
   - When cases are extremely low and no strong drivers are present, 
   forecasts should remain conservative.
   - When values are at or near recent seasonal highs during peak season, it is often more
     reasonable to expect stabilization or decline than indefinite further growth.

6. BIOLOGICAL PARAMETERS
   - Incubation Period: Typically 3-7 days.
   - Lag Effect: Transmission events (e.g., school opening) usually impact 
   reported case counts
     in the following week (Lag-1 week) due to incubation and reporting delays.

Use these patterns as soft background knowledge when interpreting events and 
making forecasts.
They are NOT strict rules; always combine them with the concrete recent data 
and external signals you receive.
)";

const std::string_view kForecastSystemPrompt = R"(You are assisting with weekly infectious-disease forecasting.

LAG POLICY:
- HFMD typically reacts to external events with ~1 week delay
    (impact_lag_weeks = 1). transmission_impact describes expected net effect
    starting in week t+impact_lag_weeks.
- Week 1 forecast should be driven primarily by recent_values and recent trend,
    but interpreted in the context of the full multi-year hospital time series.
- Weeks >= impact_lag_weeks may incorporate most of transmission_impact.

INPUT JSON SUMMARY (READ IN THIS ORDER):
1) Long-term hospital history (MANDATORY)
     - full_history: weekly dates + values over multiple years.
     - First, summarize: overall level, seasonality (e.g., typical summer peaks,
         winter lows), and how the *current level* compares to past years.
     - NEVER ignore full_history; treat it as the primary context.

2) Recent 8-week window
     - recent_values: last 8 weekly hospital cases.
     - recent_trend: {"growth_rate": float, "slope": float}.
     - Use this as a zoom-in on the latest dynamics, but interpret it *relative
         to* the long-term pattern from full_history. Short, noisy swings (e.g.,
         15->6->14->20) should not overrule stable seasonal structure.

3) Event interpreter output + external drivers
     - transmission_impact: float in [-1,1] describing expected net effect
         starting in week t+impact_lag_weeks,
     - confidence: float in [0,1] for the above impact,
     - risk_notes: optional strings explaining key drivers (school calendar,
         weather, policy changes, etc.),
     - historical_volatility: float summarizing recent variability.

4) Forecast configuration
     - horizon_weeks: int,
     - impact_lag_weeks: int,
     - mode: "standard" | "advanced".

OUTPUT STRICT JSON ONLY (SIMPLIFIED):
You MUST return a single JSON object with exactly the following top-level keys:
{
    "forecast_mean": [float >= 0],        // length = horizon_weeks
    "uncertainty_scale": float in [0, 1], // 0 = very low uncertainty, 1 = very high
    "rationale": "English explanation (<=3 sentences), 
    MUST mention how you applied the lag policy"
}

CONSTRAINTS:
- Do NOT output any other top-level keys (no "forecast", no "quantiles").
- Do NOT wrap the JSON in Markdown fences.
- The forecast_mean array MUST have length = horizon_weeks.
- All entries in forecast_mean MUST be >= 0.
- uncertainty_scale MUST be a single float in [0, 1].
- Forecast_mean profile should be smooth; avoid implausible spikes that contradict
    lag policy, long-term seasonality in full_history, or historical volatility.
- Always mention the lag interpretation inside the rationale when applicable,
    and clearly distinguish between effects of past conditions (already visible
    in recent_values) vs. expected effects of *current* conditions via
    transmission_impact.
)";

namespace {

json counts_json(const WeeklySeries& s) {
    json arr = json::array();
    for (const auto& e : s.entries()) arr.push_back(e.count);
    return arr;
}

}  // namespace

double slope(const WeeklySeries& recent) {
    const std::size_t n = recent.size();
    if (n < 2) throw InsufficientHistory("slope needs at least two points");
    const double xbar = (static_cast<double>(n) - 1.0) / 2.0;
    double ybar = 0.0;
    for (const auto& e : recent.entries()) ybar += static_cast<double>(e.count);
    ybar /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (static_cast<double>(recent[i].count) - ybar);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

Prompt build_interpreter_prompt(const InterpreterPromptInputs& in) {
    std::string system;
    if (!in.retrieved.empty()) {
        system += kPassagesHeader;
        system += "\n";
        for (std::size_t i = 0; i < in.retrieved.size(); ++i) {
            const auto& c = in.retrieved[i];
            system += "[" + std::to_string(i + 1) + "] (" + c.source_doc + ") " + c.text + "\n\n";
        }
    }
    system += kInterpreterSystemPrompt;
    system += "\n";
    system += kHfmdKnowledgePrompt;

    json payload = {
        {"disease", in.disease},
        {"date", in.origin.iso()},
        {"horizon_weeks", in.horizon_weeks},
        {"impact_lag_weeks", in.impact_lag_weeks},
        {"recent_values", counts_json(in.recent)},
        {"trend_stats",
         {{"growth_rate", round_to(in.trend.growth_rate, 3)},
          {"consecutive_growth", in.trend.consecutive_growth},
          {"is_at_peak", in.trend.is_at_peak},
          {"p90_threshold", round_to(in.trend.p90_threshold, 1)}}},
        {"external_data", external_data_json(in.pack)},
    };
    return {std::move(system), payload.dump()};
}

Prompt build_forecaster_prompt(const ForecasterPromptInputs& in) {
    json dates = json::array();
    for (const auto& e : in.full_history.entries()) dates.push_back(e.week_start.iso());
    json payload = {
        {"full_history", {{"dates", std::move(dates)}, {"values", counts_json(in.full_history)}}},
        {"recent_values", counts_json(in.recent)},
        {"recent_trend",
         {{"growth_rate", round_to(in.trend.growth_rate, 3)}, {"slope", round_to(slope(in.recent), 3)}}},
        {"transmission_impact", round_to(in.signal.transmission_impact, 3)},
        {"confidence", round_to(in.signal.confidence, 3)},
        {"risk_notes", in.signal.risk_notes},
        {"historical_volatility", round_to(in.volatility.value(), 3)},
        {"horizon_weeks", in.horizon_weeks},
        {"impact_lag_weeks", in.impact_lag_weeks},
        {"mode", in.mode},
    };
    return {std::string(kForecastSystemPrompt), payload.dump()};
}

}  // namespace epicast
