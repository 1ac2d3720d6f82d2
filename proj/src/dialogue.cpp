#include "traitlab/dialogue.hpp"

#include "traitlab/textutil.hpp"

namespace traitlab {

std::optional<std::string> word_count_check(Utterance& utterance) {
    if (utterance.word_count >= kWordLimit) {
        utterance.violations.push_back(kWordLimitExceeded);
        return std::string(kWordLimitExceeded);
    }
    return std::nullopt;
}

Discourse run_dialogue(const DebateConfig& config, Provider& provider_p1, Provider& provider_p2,
                       const SanitizeRules& rules, const PromptTemplates& templates,
                       const std::string& created_at, bool send_history) {
    config.validate();

    Discourse discourse;
    discourse.id = discourse_id_for(config);
    discourse.config = config;
    discourse.created_at = created_at;
    discourse.provider_ids = {{"P1", provider_p1.id()}, {"P2", provider_p2.id()}};

    std::optional<std::string> previous;
    const int total_turns = 2 * config.turns_per_participant;
    for (int turn = 0; turn < total_turns; ++turn) {
        const Speaker speaker = (turn % 2 == 0) ? Speaker::P1 : Speaker::P2;
        Provider& provider = (speaker == Speaker::P1) ? provider_p1 : provider_p2;
        const TraitProfile& profile =
            (speaker == Speaker::P1) ? config.profile_p1 : config.profile_p2;

        const std::string system_prompt =
            render_debater_system_prompt(templates, config.topic, profile);
        const std::string user_prompt = render_debater_user_prompt(templates, previous);

        const ProviderReply reply =
            provider.complete(system_prompt, user_prompt, config.generation,
                              CallContext{discourse.id, turn});
        if (!reply.ok()) {
            discourse.truncated = true;
            discourse.failure = ProviderFailure{turn, reply.error->describe()};
            break;
        }

        const SanitizeResult sanitized =
            sanitize_utterance(reply.text, rules, SanitizeContext{system_prompt, user_prompt});

        Utterance utterance;
        utterance.index = turn;
        utterance.speaker = speaker;
        utterance.raw_text = reply.text;
        utterance.clean_text = sanitized.clean;
        utterance.word_count = whitespace_word_count(utterance.clean_text);
        if (sanitized.empty_after_sanitize) utterance.violations.push_back(kEmptyAfterSanitize);
        word_count_check(utterance);

        if (send_history && previous) {
            previous = *previous + "\n" + utterance.clean_text;
        } else {
            previous = utterance.clean_text;
        }
        discourse.utterances.push_back(std::move(utterance));
    }
    return discourse;
}

}  // namespace traitlab
