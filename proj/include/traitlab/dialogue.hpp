#pragma once

#include <optional>
#include <string>

#include "traitlab/discourse.hpp"
#include "traitlab/prompts.hpp"
#include "traitlab/providers.hpp"
#include "traitlab/sanitize.hpp"

namespace traitlab {

/// Responses must stay under this many words; at or above it the utterance is
/// tagged WordLimitExceeded. Advisory only: text is never truncated.
inline constexpr std::size_t kWordLimit = 50;

/// Appends WordLimitExceeded when word_count >= kWordLimit. Returns the tag
/// when added.
std::optional<std::string> word_count_check(Utterance& utterance);

/// Runs one debate: 2 x turns_per_participant alternating turns starting with
/// P1, each user prompt embedding the previous turn's clean text. A provider
/// failure truncates the discourse (flag + failure record) instead of
/// throwing. `created_at` is stamped verbatim. With `send_history` the user
/// prompt embeds every prior clean text (newline-joined) instead of only the
/// last one; the wire format stays system + one user message either way.
Discourse run_dialogue(const DebateConfig& config, Provider& provider_p1, Provider& provider_p2,
                       const SanitizeRules& rules, const PromptTemplates& templates,
                       const std::string& created_at, bool send_history = false);

}  // namespace traitlab
