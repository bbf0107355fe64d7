#pragma once

#include <string>

#include "epicast/llm_provider.hpp"

namespace epicast {

enum class AgentRole { interpreter, forecaster };

std::string to_string(AgentRole r);

/// Deterministic stand-ins for the two LLM agents. They read the JSON user
/// message of the request and answer with a contract-conforming object.
///
/// momentum (interpreter): school status of the week after the origin and the
///   latest weekly temperature set a small signed impact.
/// momentum (forecaster): last value plus half the recent OLS slope per step,
///   nudged by impact x confidence from the lag week onward.
/// persistence: neutral signal / last value repeated.
MockProvider::Generator make_mock_generator(const std::string& name, AgentRole role);

/// Builds the provider described by `config`. Replay providers are built by
/// the caller from transcripts, so ProviderKind::replay is rejected here.
std::shared_ptr<LlmProvider> make_provider(const LlmProviderConfig& config, AgentRole role);

}  // namespace epicast
