#pragma once

#include <optional>
#include <string>

#include "traitlab/discourse.hpp"
#include "traitlab/experiment.hpp"
#include "traitlab/traits.hpp"

namespace traitlab {

struct PromptPair {
    std::string system;
    std::string user;
};

class TemplateError : public ConfigError {
public:
    explicit TemplateError(const std::string& what) : ConfigError(what) {}
};

/// The four prompt templates. Placeholders: {topic} and {trait:<Name>} in the
/// debater system prompt, {previous} in the debater user prompt, {label} and
/// {text} in the judge user prompt. The judge system prompt takes none.
///
/// Templates can be overridden from a directory of UTF-8 files
/// (debater_system.txt, debater_user.txt, judge_system.txt, judge_user.txt);
/// a single trailing newline in a file is not part of the template. Unknown
/// placeholders are a startup error.
struct PromptTemplates {
    std::string debater_system;
    std::string debater_user;
    std::string judge_system;
    std::string judge_user;

    static PromptTemplates builtin();
    static PromptTemplates load_dir(const std::string& dir);

    /// Placeholder validation; throws TemplateError naming the bad slot.
    void validate() const;
};

std::string render_debater_system_prompt(const PromptTemplates& templates, const Topic& topic,
                                         const TraitProfile& profile);

/// Opening turn (no previous utterance) substitutes the empty string.
std::string render_debater_user_prompt(const PromptTemplates& templates,
                                       const std::optional<std::string>& previous);

class EmptyTextError : public std::runtime_error {
public:
    explicit EmptyTextError(const std::string& what) : std::runtime_error(what) {}
};

/// participant_label is "Person One" or "Person Two"; participant_text is the
/// newline-joined clean utterances of that participant. Throws EmptyTextError
/// when the text is blank.
PromptPair render_judge_prompts(const PromptTemplates& templates,
                                const std::string& participant_label,
                                const std::string& participant_text);

/// "Person One" / "Person Two": the only participant identity judges see.
std::string participant_label(Speaker speaker);

}  // namespace traitlab
