#include "epicast/llm_provider.hpp"

#include <httplib.h>

#include <cstdlib>

#include "epicast/digest.hpp"
#include "epicast/error.hpp"
#include "epicast/transcripts.hpp"

namespace epicast {

using nlohmann::json;

std::string to_string(ProviderKind k) {
    switch (k) {
        case ProviderKind::openai_compatible: return "openai_compatible";
        case ProviderKind::mock: return "mock";
        case ProviderKind::replay: return "replay";
    }
    return "mock";
}

ProviderKind parse_provider_kind(const std::string& s) {
    if (s == "openai_compatible") return ProviderKind::openai_compatible;
    if (s == "mock") return ProviderKind::mock;
    if (s == "replay") return ProviderKind::replay;
    throw ValidationError("unknown provider_id '" + s + "'");
}

std::string Prompt::hash() const { return sha256_hex(text()); }

ChatRequest make_request(const LlmProviderConfig& config, Prompt prompt) {
    return {config.model_name, config.temperature, config.max_tokens, std::move(prompt)};
}

json chat_completion_body(const ChatRequest& request) {
    return {{"model", request.model},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens},
            {"messages",
             json::array({{{"role", "system"}, {"content", request.prompt.system}},
                          {{"role", "user"}, {"content", request.prompt.user}}})}};
}

std::string extract_message_content(const std::string& response_body) {
    json j = json::parse(response_body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw TransportError("chat-completion response is not a JSON object");
    }
    auto choices = j.find("choices");
    if (choices == j.end() || !choices->is_array() || choices->empty()) {
        throw TransportError("chat-completion response has no choices");
    }
    const json& first = (*choices)[0];
    if (!first.is_object() || !first.contains("message") || !first["message"].is_object() ||
        !first["message"].contains("content") || !first["message"]["content"].is_string()) {
        throw TransportError("chat-completion response has no message content");
    }
    return first["message"]["content"].get<std::string>();
}

OpenAiCompatibleProvider::OpenAiCompatibleProvider(LlmProviderConfig config) : config_(std::move(config)) {
    const std::string& url = config_.endpoint_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ValidationError("endpoint_url '" + url + "' must start with http:// or https://");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (!config_.api_key_env.empty() && std::getenv(config_.api_key_env.c_str()) == nullptr) {
        throw ValidationError("environment variable " + config_.api_key_env + " is not set");
    }
}

std::string OpenAiCompatibleProvider::complete(const ChatRequest& request) {
    httplib::Client client(scheme_host_port_);
    const auto secs = static_cast<time_t>(config_.timeout_seconds);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(secs, 0);
    client.set_write_timeout(secs, 0);

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    auto res = client.Post(path_, headers, chat_completion_body(request).dump(), "application/json");
    if (!res) {
        throw TransportError("request to " + config_.endpoint_url + " failed: " +
                             httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw TransportError("HTTP " + std::to_string(res->status) + " from " + config_.endpoint_url);
    }
    return extract_message_content(res->body);
}

void MockProvider::script(const std::string& request_hash, std::vector<std::string> responses) {
    std::lock_guard lock(mu_);
    auto& q = scripted_[request_hash];
    for (auto& r : responses) q.push_back(std::move(r));
}

void MockProvider::script_any(std::vector<std::string> responses) {
    std::lock_guard lock(mu_);
    for (auto& r : responses) any_.push_back(std::move(r));
}

std::string MockProvider::complete(const ChatRequest& request) {
    const std::string hash = request.prompt.hash();
    {
        std::lock_guard lock(mu_);
        seen_.push_back(hash);
        auto it = scripted_.find(hash);
        if (it != scripted_.end() && !it->second.empty()) {
            std::string r = std::move(it->second.front());
            it->second.pop_front();
            return r;
        }
        if (!any_.empty()) {
            std::string r = std::move(any_.front());
            any_.pop_front();
            return r;
        }
    }
    if (!generator_) throw TransportError("mock provider has no reply for request " + hash);
    return generator_(request);
}

std::size_t MockProvider::calls() const {
    std::lock_guard lock(mu_);
    return seen_.size();
}

std::vector<std::string> MockProvider::seen_hashes() const {
    std::lock_guard lock(mu_);
    return seen_;
}

ReplayProvider::ReplayProvider(const std::vector<Transcript>& transcripts) {
    for (const auto& t : transcripts) responses_[t.request_hash].push_back(t.raw_response);
}

std::string ReplayProvider::complete(const ChatRequest& request) {
    const std::string hash = request.prompt.hash();
    std::lock_guard lock(mu_);
    auto it = responses_.find(hash);
    if (it == responses_.end() || it->second.empty()) {
        throw TransportError("no recorded response for request " + hash);
    }
    std::string r = std::move(it->second.front());
    it->second.pop_front();
    return r;
}

std::string RecordingProvider::complete(const ChatRequest& request) {
    std::string raw = inner_->complete(request);
    store_->append({request.prompt.hash(), request.prompt.text(), raw, utc_timestamp()});
    return raw;
}

}  // namespace epicast
