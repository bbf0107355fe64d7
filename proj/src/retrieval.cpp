#include "epicast/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "epicast/error.hpp"

namespace epicast {

namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Paragraphs are separated by a line that is empty or whitespace only.
std::vector<std::string_view> split_paragraphs(std::string_view doc) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < doc.size()) {
        if (doc[i] != '\n') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < doc.size() && (doc[j] == ' ' || doc[j] == '\t' || doc[j] == '\r')) ++j;
        if (j < doc.size() && doc[j] == '\n') {
            auto p = trim(doc.substr(start, i - start));
            if (!p.empty()) out.push_back(p);
            while (j < doc.size() && is_space(doc[j])) ++j;
            start = i = j;
        } else {
            i = j;
        }
    }
    auto p = trim(doc.substr(start));
    if (!p.empty()) out.push_back(p);
    return out;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) n += !is_continuation(c);
    return n;
}

std::string_view utf8_prefix(std::string_view s, std::size_t n) {
    std::size_t seen = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!is_continuation(static_cast<unsigned char>(s[i]))) {
            if (seen == n) return s.substr(0, i);
            ++seen;
        }
    }
    return s;
}

std::vector<GuidelineChunk> chunk_document(std::string_view doc, std::size_t max_chars,
                                           const std::string& source_doc) {
    if (max_chars == 0) throw std::invalid_argument("chunk size must be positive");
    std::vector<std::string> pieces;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) pieces.push_back(std::move(current));
        current.clear();
    };
    for (std::string_view para : split_paragraphs(doc)) {
        const std::size_t len = utf8_length(para);
        if (len > max_chars) {
            flush();
            while (!para.empty()) {
                auto head = utf8_prefix(para, max_chars);
                auto t = trim(head);
                if (!t.empty()) pieces.emplace_back(t);
                para.remove_prefix(head.size());
            }
        } else if (current.empty()) {
            current = para;
        } else if (utf8_length(current) + 2 + len <= max_chars) {
            current += "\n\n";
            current += para;
        } else {
            flush();
            current = para;
        }
    }
    flush();

    std::vector<GuidelineChunk> chunks;
    chunks.reserve(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        chunks.push_back({static_cast<int>(i), std::move(pieces[i]), source_doc});
    }
    return chunks;
}

std::vector<std::string> HashingEmbedder::tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '_' || c >= 0x80) {
            cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<double> HashingEmbedder::embed(std::string_view text) const {
    std::vector<double> v(dim_, 0.0);
    for (const auto& tok : tokenize(text)) {
        const std::uint64_t h = fnv1a(tok);
        const double sign = (h >> 63) ? -1.0 : 1.0;
        v[h % dim_] += sign;
    }
    return v;
}

void VectorIndex::add(GuidelineChunk chunk, const EmbeddingProvider& embedder) {
    auto v = embedder.embed(chunk.text);
    if (v.size() != dim_) {
        throw std::invalid_argument("embedding dimension " + std::to_string(v.size()) +
                                    " does not match index dimension " + std::to_string(dim_));
    }
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm > 0.0) {
        for (double& x : v) x /= norm;
    }
    chunks_.push_back(std::move(chunk));
    vectors_.push_back(std::move(v));
}

VectorIndex build_guideline_index(const std::string& dir, const EmbeddingProvider& embedder,
                                  std::size_t max_chars) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError(dir, "guideline directory not found");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    VectorIndex index(embedder.dim());
    int next_id = 0;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError(path.string(), "cannot open guideline document");
        std::ostringstream ss;
        ss << in.rdbuf();
        for (auto& c : chunk_document(ss.str(), max_chars, path.filename().string())) {
            c.id = next_id++;
            index.add(std::move(c), embedder);
        }
    }
    return index;
}

std::string RetrievalQuery::composed() const {
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? " " : "") + terms[i];
    return s;
}

RetrievalQuery compose_query(unsigned month, bool weather_present, std::optional<SchoolStatus> school) {
    RetrievalQuery q;
    if (month >= 5 && month <= 7) q.terms.emplace_back(kSeasonalPeakTerm);
    else if (month == 1 || month == 2) q.terms.emplace_back(kSeasonalWinterTerm);
    if (weather_present) q.terms.emplace_back(kWeatherTerm);
    if (school == SchoolStatus::in_session) q.terms.emplace_back(kSchoolTerm);
    return q;
}

RetrievalQuery compose_query(const Date& origin, const EvidencePack& pack) {
    const bool weather = std::any_of(pack.weather.begin(), pack.weather.end(),
                                     [](const WeatherWeekly& w) { return w.any_present(); });
    std::optional<SchoolStatus> school;
    for (const auto& ev : pack.events) {
        if (ev.week_start == origin) school = ev.school_status;
    }
    return compose_query(origin.month(), weather, school);
}

std::vector<GuidelineChunk> retrieve(const VectorIndex& index, const RetrievalQuery& query,
                                     const EmbeddingProvider& embedder, std::size_t k,
                                     std::size_t max_chars) {
    if (index.empty()) throw std::invalid_argument("retrieval over an empty guideline index");
    auto q = embedder.embed(query.composed());
    const double qn = std::sqrt(std::inner_product(q.begin(), q.end(), q.begin(), 0.0));
    if (qn > 0.0) {
        for (double& x : q) x /= qn;
    }
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        const auto& v = index.vectors()[i];
        scored.emplace_back(std::inner_product(q.begin(), q.end(), v.begin(), 0.0), i);
    }
    // Scores this close are the same cosine up to rounding and count as ties.
    auto better = [&](const auto& a, const auto& b) {
        if (std::abs(a.first - b.first) > 1e-12) return a.first > b.first;
        return index.chunks()[a.second].id < index.chunks()[b.second].id;
    };
    const std::size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                      better);

    std::vector<GuidelineChunk> out;
    std::size_t budget = max_chars;
    for (std::size_t i = 0; i < take && budget > 0; ++i) {
        GuidelineChunk c = index.chunks()[scored[i].second];
        const std::size_t len = utf8_length(c.text);
        if (len > budget) c.text = std::string(utf8_prefix(c.text, budget));
        budget -= std::min(len, budget);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace epicast
