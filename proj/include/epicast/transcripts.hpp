#pragma once

#include <mutex>
#include <string>
#include <vector>

namespace epicast {

struct Transcript {
    std::string request_hash;
    std::string prompt;
    std::string raw_response;
    std::string timestamp;  // UTC, ISO-8601

    bool operator==(const Transcript&) const = default;
};

/// Append-only JSON-lines transcript file. Appends are serialized so one
/// store can be shared by concurrent workers.
class TranscriptStore {
public:
    explicit TranscriptStore(std::string path);

    void append(const Transcript& t);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::mutex mu_;
};

std::vector<Transcript> load_transcripts(const std::string& path);

/// `<agent>__<provider>__<run_id>.jsonl`
std::string transcript_filename(const std::string& agent, const std::string& provider,
                                const std::string& run_id);

/// All transcripts for `agent` and `run_id` in `dir`, whatever provider recorded them.
std::vector<Transcript> load_transcripts_for(const std::string& dir, const std::string& agent,
                                             const std::string& run_id);

std::string utc_timestamp();

}  // namespace epicast
