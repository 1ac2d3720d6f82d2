#include "traitlab/judging.hpp"

#include "traitlab/textutil.hpp"

namespace traitlab {

namespace {

/// One past the '}' that balances the '{' at `start`, skipping string
/// contents and escapes; npos when this brace never balances.
std::size_t balanced_span_end(const std::string& text, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string::npos;
}

VerdictParse invalid(InvalidReason::Kind kind, std::string detail = "") {
    VerdictParse parse;
    parse.valid = false;
    parse.reason = InvalidReason{kind, std::move(detail)};
    return parse;
}

/// Validates one extracted {"predicted_bfi": ...} object.
VerdictParse validate_verdict_object(const nlohmann::json& object) {
    const auto& bfi = object.at("predicted_bfi");
    if (!bfi.is_object()) {
        return invalid(InvalidReason::Kind::MissingKey, "predicted_bfi is not an object");
    }

    // Echo wins over missing/invalid: a "High/Low" anywhere means the judge
    // returned the template, so per-trait complaints would be misleading.
    for (const TraitName trait : kAllTraits) {
        const auto it = bfi.find(to_string(trait));
        if (it == bfi.end() || !it->is_string()) continue;
        if (lowercase_ascii(trim(it->get<std::string>())) == "high/low") {
            return invalid(InvalidReason::Kind::EchoedTemplate, to_string(trait));
        }
    }

    VerdictParse parse;
    for (const TraitName trait : kAllTraits) {
        const auto it = bfi.find(to_string(trait));
        if (it == bfi.end()) {
            return invalid(InvalidReason::Kind::MissingKey, "predicted_bfi." + to_string(trait));
        }
        if (!it->is_string()) {
            return invalid(InvalidReason::Kind::InvalidLevel,
                           to_string(trait) + "=" + it->dump());
        }
        const auto level = level_from_string(trim(it->get<std::string>()));
        if (!level) {
            return invalid(InvalidReason::Kind::InvalidLevel,
                           to_string(trait) + "=" + it->get<std::string>());
        }
        parse.predicted.set_level(trait, *level);
    }

    // Optional per-trait yes/no consistency map; a malformed one is dropped
    // rather than invalidating an otherwise complete verdict.
    if (object.contains("consistency") && object.at("consistency").is_object()) {
        std::map<TraitName, bool> consistency;
        bool usable = true;
        for (const auto& [key, value] : object.at("consistency").items()) {
            const auto trait = trait_from_string(key);
            if (!trait) continue;
            if (value.is_boolean()) {
                consistency[*trait] = value.get<bool>();
            } else if (value.is_string()) {
                const std::string text = lowercase_ascii(trim(value.get<std::string>()));
                if (text == "yes") {
                    consistency[*trait] = true;
                } else if (text == "no") {
                    consistency[*trait] = false;
                } else {
                    usable = false;
                }
            } else {
                usable = false;
            }
        }
        if (usable && !consistency.empty()) parse.consistency = std::move(consistency);
    }

    parse.valid = true;
    return parse;
}

}  // namespace

std::string invalid_reason_kind_to_string(InvalidReason::Kind kind) {
    switch (kind) {
        case InvalidReason::Kind::NoJsonFound: return "no_json_found";
        case InvalidReason::Kind::UnbalancedJson: return "unbalanced_json";
        case InvalidReason::Kind::MissingKey: return "missing_key";
        case InvalidReason::Kind::InvalidLevel: return "invalid_level";
        case InvalidReason::Kind::EchoedTemplate: return "echoed_template";
        case InvalidReason::Kind::Transport: return "transport";
        case InvalidReason::Kind::EmptyText: return "empty_text";
    }
    return "no_json_found";
}

std::optional<InvalidReason::Kind> invalid_reason_kind_from_string(const std::string& text) {
    if (text == "no_json_found") return InvalidReason::Kind::NoJsonFound;
    if (text == "unbalanced_json") return InvalidReason::Kind::UnbalancedJson;
    if (text == "missing_key") return InvalidReason::Kind::MissingKey;
    if (text == "invalid_level") return InvalidReason::Kind::InvalidLevel;
    if (text == "echoed_template") return InvalidReason::Kind::EchoedTemplate;
    if (text == "transport") return InvalidReason::Kind::Transport;
    if (text == "empty_text") return InvalidReason::Kind::EmptyText;
    return std::nullopt;
}

namespace {

/// Validation results for every predicted_bfi object in the text, in order,
/// plus enough scan state to classify an empty harvest.
struct VerdictScan {
    std::vector<VerdictParse> found;
    bool had_open_brace = false;
    bool saw_balanced = false;
    bool saw_parseable = false;

    VerdictParse none_found_reason() const {
        if (!had_open_brace || !saw_parseable) {
            if (had_open_brace && !saw_balanced) return invalid(InvalidReason::Kind::UnbalancedJson);
            return invalid(InvalidReason::Kind::NoJsonFound);
        }
        return invalid(InvalidReason::Kind::MissingKey, "predicted_bfi");
    }
};

VerdictScan scan_verdict_objects(const std::string& raw, std::size_t limit) {
    VerdictScan scan;
    std::size_t pos = raw.find('{');
    scan.had_open_brace = pos != std::string::npos;
    for (; pos != std::string::npos && scan.found.size() < limit; pos = raw.find('{', pos + 1)) {
        const std::size_t end = balanced_span_end(raw, pos);
        if (end == std::string::npos) continue;
        scan.saw_balanced = true;
        const nlohmann::json object =
            nlohmann::json::parse(raw.substr(pos, end - pos), nullptr, false);
        if (object.is_discarded() || !object.is_object()) continue;
        scan.saw_parseable = true;
        if (object.contains("predicted_bfi")) {
            scan.found.push_back(validate_verdict_object(object));
            pos = end - 1;  // resume after this object, not inside it
        }
    }
    return scan;
}

}  // namespace

VerdictParse parse_verdict(const std::string& raw) {
    const VerdictScan scan = scan_verdict_objects(raw, 1);
    return scan.found.empty() ? scan.none_found_reason() : scan.found.front();
}

std::pair<VerdictParse, VerdictParse> parse_joint_verdicts(const std::string& raw) {
    const VerdictScan scan = scan_verdict_objects(raw, 2);
    if (scan.found.empty()) {
        const VerdictParse reason = scan.none_found_reason();
        return {reason, reason};
    }
    if (scan.found.size() == 1) {
        return {scan.found.front(),
                invalid(InvalidReason::Kind::MissingKey, "second predicted_bfi object")};
    }
    return {scan.found[0], scan.found[1]};
}

nlohmann::json JudgeVerdict::to_json() const {
    nlohmann::json j = {
        {"schema_version", kSchemaVersion},
        {"judge_id", judge_id},
        {"discourse_id", discourse_id},
        {"participant", to_string(participant)},
        {"status", valid ? "valid" : "invalid"},
        {"raw_response", raw_response},
    };
    if (valid) j["predicted"] = predicted.to_json();
    if (consistency) {
        nlohmann::json c = nlohmann::json::object();
        for (const auto& [trait, consistent] : *consistency) {
            c[to_string(trait)] = consistent ? "yes" : "no";
        }
        j["consistency"] = c;
    }
    if (invalid_reason) {
        j["invalid_reason"] = {
            {"kind", invalid_reason_kind_to_string(invalid_reason->kind)},
            {"detail", invalid_reason->detail},
        };
    }
    return j;
}

JudgeVerdict JudgeVerdict::from_json(const nlohmann::json& j) {
    JudgeVerdict verdict;
    verdict.judge_id = j.at("judge_id").get<std::string>();
    verdict.discourse_id = j.at("discourse_id").get<std::string>();
    const auto participant = speaker_from_string(j.at("participant").get<std::string>());
    if (!participant) throw std::runtime_error("verdict: unknown participant");
    verdict.participant = *participant;
    const std::string status = j.at("status").get<std::string>();
    if (status != "valid" && status != "invalid") {
        throw std::runtime_error("verdict: unknown status '" + status + "'");
    }
    verdict.valid = status == "valid";
    verdict.raw_response = j.value("raw_response", std::string());
    if (verdict.valid) verdict.predicted = parse_trait_profile(j.at("predicted"));
    if (j.contains("consistency")) {
        std::map<TraitName, bool> consistency;
        for (const auto& [key, value] : j.at("consistency").items()) {
            const auto trait = trait_from_string(key);
            if (!trait) throw std::runtime_error("verdict: unknown consistency trait " + key);
            consistency[*trait] = value.get<std::string>() == "yes";
        }
        verdict.consistency = std::move(consistency);
    }
    if (!verdict.valid) {
        const auto& reason = j.at("invalid_reason");
        const auto kind = invalid_reason_kind_from_string(reason.at("kind").get<std::string>());
        if (!kind) throw std::runtime_error("verdict: unknown invalid_reason kind");
        verdict.invalid_reason = InvalidReason{*kind, reason.value("detail", std::string())};
    }
    return verdict;
}

JudgeVerdict judge_participant(Provider& judge, const GenerationParams& params,
                               const Discourse& discourse, const PromptTemplates& templates,
                               Speaker participant, const JudgeOptions& options) {
    JudgeVerdict verdict;
    verdict.judge_id = judge.id();
    verdict.discourse_id = discourse.id;
    verdict.participant = participant;

    const std::string text = discourse.participant_text(participant);
    if (trim(text).empty()) {
        verdict.invalid_reason =
            InvalidReason{InvalidReason::Kind::EmptyText, "participant has no usable text"};
        return verdict;
    }

    const PromptPair prompts =
        render_judge_prompts(templates, participant_label(participant), text);
    const CallContext context{discourse.id, participant == Speaker::P1 ? 0 : 1};

    for (int attempt = 0; attempt <= options.invalid_retries; ++attempt) {
        const ProviderReply reply = judge.complete(prompts.system, prompts.user, params, context);
        if (!reply.ok()) {
            verdict.valid = false;
            verdict.invalid_reason =
                InvalidReason{InvalidReason::Kind::Transport, reply.error->describe()};
            break;
        }
        verdict.raw_response = reply.text;
        VerdictParse parse = parse_verdict(reply.text);
        if (parse.valid) {
            verdict.valid = true;
            verdict.predicted = parse.predicted;
            verdict.consistency = std::move(parse.consistency);
            verdict.invalid_reason.reset();
            break;
        }
        verdict.valid = false;
        verdict.invalid_reason = parse.reason;
    }
    return verdict;
}

std::vector<JudgeVerdict> judge_discourse(Provider& judge, const GenerationParams& params,
                                          const Discourse& discourse,
                                          const PromptTemplates& templates,
                                          const JudgeOptions& options) {
    std::vector<JudgeVerdict> verdicts;
    verdicts.push_back(
        judge_participant(judge, params, discourse, templates, Speaker::P1, options));
    verdicts.push_back(
        judge_participant(judge, params, discourse, templates, Speaker::P2, options));
    return verdicts;
}

std::vector<JudgeVerdict> judge_discourse_joint(Provider& judge, const GenerationParams& params,
                                                const Discourse& discourse,
                                                const PromptTemplates& templates,
                                                const JudgeOptions& options) {
    const std::string text_p1 = discourse.participant_text(Speaker::P1);
    const std::string text_p2 = discourse.participant_text(Speaker::P2);
    const bool empty_p1 = trim(text_p1).empty();
    const bool empty_p2 = trim(text_p2).empty();
    if (empty_p1 || empty_p2) {
        // A one-sided transcript cannot be judged jointly; the usable side
        // still gets its own call.
        std::vector<JudgeVerdict> verdicts;
        verdicts.push_back(
            judge_participant(judge, params, discourse, templates, Speaker::P1, options));
        verdicts.push_back(
            judge_participant(judge, params, discourse, templates, Speaker::P2, options));
        return verdicts;
    }

    const PromptPair prompts_p1 =
        render_judge_prompts(templates, participant_label(Speaker::P1), text_p1);
    const PromptPair prompts_p2 =
        render_judge_prompts(templates, participant_label(Speaker::P2), text_p2);
    const std::string user_prompt = prompts_p1.user + "\n\n" + prompts_p2.user;
    const CallContext context{discourse.id, 0};

    JudgeVerdict verdict_p1;
    verdict_p1.judge_id = judge.id();
    verdict_p1.discourse_id = discourse.id;
    verdict_p1.participant = Speaker::P1;
    JudgeVerdict verdict_p2 = verdict_p1;
    verdict_p2.participant = Speaker::P2;

    const auto bind = [](JudgeVerdict& verdict, const VerdictParse& parse,
                         const std::string& raw) {
        verdict.raw_response = raw;
        if (parse.valid) {
            verdict.valid = true;
            verdict.predicted = parse.predicted;
            verdict.consistency = parse.consistency;
            verdict.invalid_reason.reset();
        } else {
            verdict.valid = false;
            verdict.invalid_reason = parse.reason;
        }
    };

    for (int attempt = 0; attempt <= options.invalid_retries; ++attempt) {
        const ProviderReply reply =
            judge.complete(prompts_p1.system, user_prompt, params, context);
        if (!reply.ok()) {
            const InvalidReason reason{InvalidReason::Kind::Transport, reply.error->describe()};
            verdict_p1.valid = verdict_p2.valid = false;
            verdict_p1.invalid_reason = verdict_p2.invalid_reason = reason;
            break;
        }
        const auto [parse_p1, parse_p2] = parse_joint_verdicts(reply.text);
        bind(verdict_p1, parse_p1, reply.text);
        bind(verdict_p2, parse_p2, reply.text);
        if (parse_p1.valid && parse_p2.valid) break;
    }
    return {verdict_p1, verdict_p2};
}

std::map<std::string, InvalidRate> invalid_rate_by_judge(
    const std::vector<JudgeVerdict>& verdicts) {
    std::map<std::string, InvalidRate> rates;
    for (const auto& verdict : verdicts) {
        auto& rate = rates[verdict.judge_id];
        ++rate.total;
        if (!verdict.valid) ++rate.invalid;
    }
    return rates;
}

}  // namespace traitlab
