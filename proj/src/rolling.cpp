#include "epicast/rolling.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "epicast/calibration.hpp"
#include "epicast/contracts.hpp"
#include "epicast/error.hpp"
#include "epicast/prompts.hpp"

namespace epicast {

namespace {

struct OriginOutcome {
    std::vector<ForecastRecord> records;
    OriginAudit audit;
};

std::size_t origin_index(const WeeklySeries& series, const Date& origin, const RollingOptions& opt) {
    const auto idx = series.index_of(origin);
    if (!idx) throw ValidationError("origin " + origin.iso() + " is not a week in the series");
    if (*idx + 1 < opt.recent_window) {
        throw InsufficientHistory("origin " + origin.iso() + " has fewer than " +
                                  std::to_string(opt.recent_window) + " weeks of history");
    }
    if (*idx + static_cast<std::size_t>(opt.horizon) >= series.size()) {
        throw InsufficientHistory("origin " + origin.iso() + " lacks " + std::to_string(opt.horizon) +
                                  " observed weeks ahead");
    }
    return *idx;
}

void audit_origin(OriginAudit& audit, const EvidencePack* pack, const RollingOptions& opt) {
    const Date& origin = audit.origin;
    if (audit.latest_series_week > origin) {
        audit.violations.push_back("series week " + audit.latest_series_week.iso() + " after origin");
    }
    if (opt.ablation.p90_scope == P90Scope::full) {
        audit.violations.push_back("p90 threshold computed over weeks after origin");
    }
    if (!pack) return;
    for (const auto& w : pack->weather) audit.latest_weather_week = std::max(audit.latest_weather_week, w.week_start);
    for (const auto& g : pack->gov_stats) {
        audit.latest_gov_month_end = std::max(audit.latest_gov_month_end, g.period.last_day());
    }
    for (const auto& e : pack->events) audit.latest_event_week = std::max(audit.latest_event_week, e.week_start);
    const auto found = audit_pack(*pack, origin, opt.horizon);
    audit.violations.insert(audit.violations.end(), found.begin(), found.end());
}

OriginOutcome run_origin(const PipelineContext& ctx, const Date& origin, const RollingOptions& opt) {
    const std::size_t idx = origin_index(ctx.series, origin, opt);
    const WeeklySeries train = ctx.series.prefix(idx + 1);
    const WeeklySeries recent = train.window_ending(idx + 1, opt.recent_window);

    OriginOutcome out;
    out.audit.origin = origin;
    out.audit.latest_series_week = std::max(train.last_date(), recent.last_date());
    out.audit.latest_weather_week = origin;
    out.audit.latest_gov_month_end = origin;
    out.audit.latest_event_week = origin;

    const P90Scope scope = opt.ablation.p90_scope;
    const TrendStats trend = compute_trend(scope == P90Scope::full ? ctx.series : train, idx, scope);

    auto invalid = [&](int interp_attempts, int fc_attempts) {
        for (int k = 0; k < opt.horizon; ++k) {
            ForecastRecord r;
            r.origin_date = origin;
            r.horizon_step = k + 1;
            r.y_true = ctx.series[idx + 1 + k].count;
            r.status = RecordStatus::invalid_origin;
            r.interpreter_attempts = interp_attempts;
            r.forecaster_attempts = fc_attempts;
            out.records.push_back(r);
        }
    };

    ContextSignal signal = ContextSignal::neutral();
    int interp_attempts = 0;
    if (!opt.ablation.no_agent1) {
        const EvidencePack pack = build_evidence_pack(origin, opt.horizon, ctx.sources, opt.ablation);
        audit_origin(out.audit, &pack, opt);
        if (!out.audit.clean() && opt.enforce_leak_audit) {
            throw LeakError("origin " + origin.iso() + ": " + out.audit.violations.front());
        }
        std::vector<GuidelineChunk> retrieved;
        if (!opt.ablation.no_rag && !ctx.index.empty()) {
            retrieved = retrieve(ctx.index, compose_query(origin, pack), ctx.embedder, opt.retrieve_k,
                                 opt.retrieve_max_chars);
        }
        const Prompt prompt = build_interpreter_prompt(
            {pack, trend, retrieved, recent, origin, opt.horizon, opt.impact_lag_weeks, opt.disease});
        if (opt.on_prompt) opt.on_prompt(origin, AgentRole::interpreter, prompt);
        const auto result = interpret(ctx.interpreter, make_request(ctx.interpreter_config, prompt));
        interp_attempts = result.attempts;
        if (!result.valid()) {
            invalid(interp_attempts, 0);
            return out;
        }
        signal = *result.value;
    } else {
        audit_origin(out.audit, nullptr, opt);
        if (!out.audit.clean() && opt.enforce_leak_audit) {
            throw LeakError("origin " + origin.iso() + ": " + out.audit.violations.front());
        }
    }

    const Volatility vol = estimate_volatility(train, idx, opt.recent_window, opt.volatility_bounds);
    const Prompt fc_prompt = build_forecaster_prompt(
        {recent, train, signal, vol, trend, opt.horizon, opt.impact_lag_weeks});
    if (opt.on_prompt) opt.on_prompt(origin, AgentRole::forecaster, fc_prompt);
    const auto raw = generate_raw_forecast(ctx.forecaster, make_request(ctx.forecaster_config, fc_prompt),
                                           opt.horizon);
    if (!raw.valid()) {
        invalid(interp_attempts, raw.attempts);
        return out;
    }

    for (int k = 0; k < opt.horizon; ++k) {
        const auto dist = calibrate_step(*raw.value, static_cast<std::size_t>(k), vol);
        ForecastRecord r;
        r.origin_date = origin;
        r.horizon_step = k + 1;
        r.y_true = ctx.series[idx + 1 + k].count;
        r.mu = raw.value->forecast_mean[k];
        r.q05 = dist.q05;
        r.q50 = dist.q50;
        r.q95 = dist.q95;
        r.family = dist.family();
        r.n_dispersion = dist.n_dispersion();
        r.p_success = dist.p_success();
        r.crps = crps(dist, r.y_true);
        r.impact = signal.transmission_impact;
        r.confidence = signal.confidence;
        r.uncertainty = raw.value->uncertainty_scale;
        r.volatility = vol.value();
        r.interpreter_attempts = interp_attempts;
        r.forecaster_attempts = raw.attempts;
        out.records.push_back(r);
    }
    return out;
}

}  // namespace

std::vector<Date> select_origins(const WeeklySeries& series, const Date& start, const Date& end,
                                 int every_n, std::size_t recent_window, int horizon) {
    if (every_n < 1) throw ValidationError("every_n must be >= 1");
    if (end < start) throw ValidationError("end date " + end.iso() + " precedes start " + start.iso());
    std::vector<Date> origins;
    int seen = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Date& d = series[i].week_start;
        if (d < start || d > end) continue;
        if (seen++ % every_n != 0) continue;
        if (i + 1 < recent_window || i + static_cast<std::size_t>(horizon) >= series.size()) continue;
        origins.push_back(d);
    }
    if (origins.empty()) {
        throw ValidationError("no usable forecast origins between " + start.iso() + " and " + end.iso());
    }
    return origins;
}

RollingResult run_rolling(const PipelineContext& ctx, const std::vector<Date>& origins,
                          const RollingOptions& options) {
    if (options.horizon < 1) throw ValidationError("horizon must be >= 1");
    if (options.recent_window < 2) throw ValidationError("recent_window must be >= 2");
    // Preconditions are checked for every origin before any provider call.
    for (const auto& o : origins) origin_index(ctx.series, o, options);

    std::vector<OriginOutcome> outcomes(origins.size());
    std::vector<std::exception_ptr> errors(origins.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= origins.size() || failed.load()) return;
            try {
                outcomes[i] = run_origin(ctx, origins[i], options);
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };

    const auto n_workers = static_cast<std::size_t>(std::max(1, options.concurrency));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(n_workers, origins.size()); ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    RollingResult result;
    for (auto& o : outcomes) {
        for (auto& r : o.records) {
            if (options.on_record) options.on_record(r);
            result.records.push_back(std::move(r));
        }
        result.audits.push_back(std::move(o.audit));
    }
    return result;
}

}  // namespace epicast
