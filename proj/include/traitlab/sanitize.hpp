#pragma once

#include <string>
#include <vector>

namespace traitlab {

struct SanitizeRules {
    bool strip_inline_tags = true;
    bool strip_prompt_echo = true;
    bool trim_whitespace = true;
    std::vector<std::string> drop_role_prefixes = {"Assistant:", "assistant:", "AI:"};
};

/// What the sanitizer saw the prompts as; used by the echo rule.
struct SanitizeContext {
    std::string system_prompt;
    std::string user_prompt;
};

struct SanitizeResult {
    std::string clean;
    /// rule name + removed text, in removal order.
    std::vector<std::pair<std::string, std::string>> removed;
    bool empty_after_sanitize = false;
};

/// Applies the enabled rules until a fixed point, so sanitizing twice equals
/// sanitizing once. Tag stripping removes well-formed <tag>...</tag> spans and
/// lone <tag> / </tag> markers; a '<' not followed by a letter (or '/') is
/// left alone, so "a < b" survives.
SanitizeResult sanitize_utterance(const std::string& raw, const SanitizeRules& rules,
                                  const SanitizeContext& context);

}  // namespace traitlab
