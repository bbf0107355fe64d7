#pragma once

#include <string>
#include <vector>

#include "epicast/trend.hpp"

namespace epicast {

/// Channels removed for an ablation run. Flags are independent; no_agent1
/// means the interpreter is never called and a neutral signal is used.
struct AblationConfig {
    bool no_agent1 = false;
    bool no_climate = false;
    bool no_rag = false;
    bool no_school_event = false;
    P90Scope p90_scope = P90Scope::past;

    /// Parses a comma-separated list such as "no-rag,no-climate".
    static AblationConfig from_flags(const std::string& csv);
    static AblationConfig from_flags(const std::string& csv, AblationConfig base);
    /// Inverse of from_flags (p90 scope excluded); empty string for the full system.
    std::string flags() const;

    bool operator==(const AblationConfig&) const = default;
};

}  // namespace epicast
