#include "epicast/transcripts.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "epicast/error.hpp"

namespace epicast {

using nlohmann::json;

TranscriptStore::TranscriptStore(std::string path) : path_(std::move(path)) {
    const auto parent = std::filesystem::path(path_).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

void TranscriptStore::append(const Transcript& t) {
    json j = {{"request_hash", t.request_hash},
              {"prompt", t.prompt},
              {"raw_response", t.raw_response},
              {"timestamp", t.timestamp}};
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out) throw IoError(path_, "cannot append transcript");
    out << j.dump() << '\n';
}

std::vector<Transcript> load_transcripts(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open transcript file");
    std::vector<Transcript> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("request_hash") ||
            !j.contains("raw_response")) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed transcript line");
        }
        out.push_back({j["request_hash"].get<std::string>(), j.value("prompt", std::string{}),
                       j["raw_response"].get<std::string>(), j.value("timestamp", std::string{})});
    }
    return out;
}

std::string transcript_filename(const std::string& agent, const std::string& provider,
                                const std::string& run_id) {
    return agent + "__" + provider + "__" + run_id + ".jsonl";
}

std::vector<Transcript> load_transcripts_for(const std::string& dir, const std::string& agent,
                                             const std::string& run_id) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError(dir, "transcript directory not found");
    std::vector<fs::path> files;
    const std::string prefix = agent + "__";
    const std::string suffix = "__" + run_id + ".jsonl";
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.size() > prefix.size() + suffix.size() && name.rfind(prefix, 0) == 0 &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Transcript> all;
    for (const auto& f : files) {
        auto t = load_transcripts(f.string());
        all.insert(all.end(), t.begin(), t.end());
    }
    return all;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace epicast
