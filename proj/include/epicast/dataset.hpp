#pragma once

#include <cstddef>
#include <memory>

#include "epicast/config.hpp"
#include "epicast/evidence.hpp"
#include "epicast/retrieval.hpp"
#include "epicast/series.hpp"

namespace epicast {

/// Everything a run reads from disk, loaded once and shared read-only.
struct Dataset {
    WeeklySeries series;
    EvidenceSources sources;
    std::unique_ptr<EmbeddingProvider> embedder;
    std::unique_ptr<VectorIndex> index;  // empty when no guideline directory is configured
    std::size_t weather_days = 0;
};

/// Loads the series (required) and whichever evidence files and guideline
/// directory `config` names. Daily weather is summarized on the series' week
/// grid. Throws IoError for missing files and ValidationError for bad content.
Dataset load_dataset(const RunConfig& config);

}  // namespace epicast
