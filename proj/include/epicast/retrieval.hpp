#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <optional>
#include <vector>

#include "epicast/date.hpp"
#include "epicast/evidence.hpp"

namespace epicast {

inline constexpr std::size_t kChunkMaxChars = 500;
inline constexpr std::size_t kRetrieveTopK = 2;
inline constexpr std::size_t kRetrieveMaxChars = 1200;

/// A guideline passage of at most 500 characters (Unicode code points).
struct GuidelineChunk {
    int id = 0;
    std::string text;
    std::string source_doc;

    bool operator==(const GuidelineChunk&) const = default;
};

/// Number of UTF-8 code points in `s`.
std::size_t utf8_length(std::string_view s);
/// Longest prefix of `s` holding at most `n` code points.
std::string_view utf8_prefix(std::string_view s, std::size_t n);

/// Splits at blank-line paragraph boundaries, packing consecutive paragraphs
/// into one chunk while they fit; paragraphs longer than `max_chars` are cut
/// into `max_chars` pieces. Chunk ids are 0..n-1.
std::vector<GuidelineChunk> chunk_document(std::string_view doc, std::size_t max_chars = kChunkMaxChars,
                                           const std::string& source_doc = {});

/// Text to fixed-dimension vector.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dim() const = 0;
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Offline embedder: lowercased word tokens hashed (FNV-1a) into signed
/// buckets. Deterministic across platforms.
class HashingEmbedder final : public EmbeddingProvider {
public:
    explicit HashingEmbedder(std::size_t dim = 256) : dim_(dim) {}
    std::size_t dim() const override { return dim_; }
    std::vector<double> embed(std::string_view text) const override;

    static std::vector<std::string> tokenize(std::string_view text);

private:
    std::size_t dim_;
};

/// Flat index of L2-normalized chunk embeddings.
class VectorIndex {
public:
    explicit VectorIndex(std::size_t dim) : dim_(dim) {}

    /// Embeds and stores `chunk`. The vector is normalized to unit length
    /// unless it is all zeros (text with no tokens).
    void add(GuidelineChunk chunk, const EmbeddingProvider& embedder);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return chunks_.size(); }
    bool empty() const { return chunks_.empty(); }
    const std::vector<GuidelineChunk>& chunks() const { return chunks_; }
    const std::vector<std::vector<double>>& vectors() const { return vectors_; }

private:
    std::size_t dim_;
    std::vector<GuidelineChunk> chunks_;
    std::vector<std::vector<double>> vectors_;
};

/// Loads every *.txt file in `dir` (sorted by filename), chunks each file
/// and indexes the chunks with ids assigned in load order.
VectorIndex build_guideline_index(const std::string& dir, const EmbeddingProvider& embedder,
                                  std::size_t max_chars = kChunkMaxChars);

struct RetrievalQuery {
    std::vector<std::string> terms;

    std::string composed() const;
    bool operator==(const RetrievalQuery&) const = default;
};

inline constexpr const char* kSeasonalPeakTerm = "HFMD peak season spring summer";
inline constexpr const char* kSeasonalWinterTerm = "winter low transmission";
inline constexpr const char* kWeatherTerm = "weather temperature impact transmission";
inline constexpr const char* kSchoolTerm = "school in_session outbreak children";

/// Seasonal term (May-July peak, January-February winter), then the weather
/// term when any weather observation is present, then the school term when
/// the origin week is in session.
RetrievalQuery compose_query(const Date& origin, const EvidencePack& pack);
RetrievalQuery compose_query(unsigned month, bool weather_present, std::optional<SchoolStatus> school);

/// Top-k chunks by cosine similarity (ties to the lower id). The returned
/// texts total at most `max_chars` code points; the last one is cut if needed.
/// Throws std::invalid_argument on an empty index.
std::vector<GuidelineChunk> retrieve(const VectorIndex& index, const RetrievalQuery& query,
                                     const EmbeddingProvider& embedder, std::size_t k = kRetrieveTopK,
                                     std::size_t max_chars = kRetrieveMaxChars);

}  // namespace epicast
