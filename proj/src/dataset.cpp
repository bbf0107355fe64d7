#include "epicast/dataset.hpp"

#include <filesystem>

#include "epicast/error.hpp"

namespace epicast {

Dataset load_dataset(const RunConfig& c) {
    if (c.data.series.empty()) throw ValidationError("config: 'data.series' is required");
    Dataset d;
    d.series = load_series_csv(c.data.series);
    if (d.series.empty()) throw ValidationError(c.data.series + ": series has no rows");
    if (!c.data.weather.empty()) {
        const auto daily = load_weather_csv(c.data.weather);
        d.weather_days = daily.size();
        if (!daily.empty()) {
            d.sources.weather = aggregate_weather(daily, week_grid_covering(daily, d.series.first_date()));
        }
    }
    if (!c.data.calendar.empty()) d.sources.calendar = load_calendar_csv(c.data.calendar);
    if (!c.data.gov.empty()) d.sources.gov = load_gov_csv(c.data.gov);
    d.sources.region = c.region;
    d.sources.web = std::make_shared<NullWebSignalClient>();
    d.embedder = std::make_unique<HashingEmbedder>();
    d.index = std::make_unique<VectorIndex>(d.embedder->dim());
    if (!c.data.guidelines_dir.empty()) {
        *d.index = build_guideline_index(c.data.guidelines_dir, *d.embedder, c.retrieval.chunk_chars);
    }
    return d;
}

}  // namespace epicast
