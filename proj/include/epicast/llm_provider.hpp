#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace epicast {

enum class ProviderKind { openai_compatible, mock, replay };

std::string to_string(ProviderKind k);
ProviderKind parse_provider_kind(const std::string& s);

inline constexpr double kInterpreterTemperature = 0.6;
inline constexpr double kForecasterTemperature = 0.2;
inline constexpr int kDefaultMaxTokens = 2000;

struct LlmProviderConfig {
    ProviderKind provider_id = ProviderKind::mock;
    std::string endpoint_url;
    std::string model_name;
    double temperature = kInterpreterTemperature;
    int max_tokens = kDefaultMaxTokens;
    /// Name of the environment variable holding the API key; the key itself
    /// is never stored in configuration.
    std::string api_key_env;
    /// Rule-based generator for the mock provider: "momentum" or "persistence".
    std::string generator = "momentum";
    /// Optional JSON-lines file of {request_hash, raw_response} canned replies
    /// consulted by the mock provider before its generator.
    std::string script;
    double timeout_seconds = 120.0;
};

/// A two-message chat prompt. `text()` is the canonical byte string that is
/// hashed and stored in transcripts.
struct Prompt {
    std::string system;
    std::string user;

    std::string text() const { return system + "\n\n" + user; }
    std::string hash() const;
    bool operator==(const Prompt&) const = default;
};

struct ChatRequest {
    std::string model;
    double temperature = 0.0;
    int max_tokens = kDefaultMaxTokens;
    Prompt prompt;
};

ChatRequest make_request(const LlmProviderConfig& config, Prompt prompt);

/// Chat-completion backend. Implementations must tolerate concurrent calls.
/// `complete` returns the raw assistant text or throws TransportError.
class LlmProvider {
public:
    virtual ~LlmProvider() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual std::string id() const = 0;
};

/// JSON body for POST /chat/completions.
nlohmann::json chat_completion_body(const ChatRequest& request);
/// choices[0].message.content of a chat-completion response; TransportError otherwise.
std::string extract_message_content(const std::string& response_body);

class OpenAiCompatibleProvider final : public LlmProvider {
public:
    explicit OpenAiCompatibleProvider(LlmProviderConfig config);
    std::string complete(const ChatRequest& request) override;
    std::string id() const override { return "openai_compatible"; }

private:
    LlmProviderConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

/// Scriptable in-process provider. Replies come from per-hash scripts first
/// (consumed in order), then from the generator. With neither available the
/// call fails with TransportError.
class MockProvider final : public LlmProvider {
public:
    using Generator = std::function<std::string(const ChatRequest&)>;

    explicit MockProvider(Generator generator = {}) : generator_(std::move(generator)) {}

    void script(const std::string& request_hash, std::vector<std::string> responses);
    /// Replies served to any request once per-hash scripts are exhausted,
    /// ahead of the generator.
    void script_any(std::vector<std::string> responses);

    std::string complete(const ChatRequest& request) override;
    std::string id() const override { return "mock"; }

    std::size_t calls() const;
    std::vector<std::string> seen_hashes() const;

private:
    Generator generator_;
    mutable std::mutex mu_;
    std::map<std::string, std::deque<std::string>> scripted_;
    std::deque<std::string> any_;
    std::vector<std::string> seen_;
};

struct Transcript;

/// Serves recorded responses by request hash, in recording order. Repeated
/// requests (the retry path) consume successive recordings.
class ReplayProvider final : public LlmProvider {
public:
    explicit ReplayProvider(const std::vector<Transcript>& transcripts);
    std::string complete(const ChatRequest& request) override;
    std::string id() const override { return "replay"; }

private:
    std::mutex mu_;
    std::map<std::string, std::deque<std::string>> responses_;
};

class TranscriptStore;

/// Decorator that appends every successful exchange to a transcript store.
class RecordingProvider final : public LlmProvider {
public:
    RecordingProvider(std::shared_ptr<LlmProvider> inner, std::shared_ptr<TranscriptStore> store)
        : inner_(std::move(inner)), store_(std::move(store)) {}
    std::string complete(const ChatRequest& request) override;
    std::string id() const override { return inner_->id(); }

private:
    std::shared_ptr<LlmProvider> inner_;
    std::shared_ptr<TranscriptStore> store_;
};

}  // namespace epicast
