#include "traitlab/prompts.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "traitlab/textutil.hpp"

namespace traitlab {

namespace {

// Rendered output must match these byte-for-byte after substitution; the
// golden tests under tests/golden/ pin them.
constexpr const char* kDebaterSystem =
    "You are participating in a structured debate on: '{topic}'\n"
    "Your responses should reflect these personality traits:\n"
    "- Agreeableness: {trait:Agreeableness}\n"
    "- Openness: {trait:Openness}\n"
    "- Conscientiousness: {trait:Conscientiousness}\n"
    "- Extraversion: {trait:Extraversion}\n"
    "- Neuroticism: {trait:Neuroticism}\n"
    "\n"
    "Rules:\n"
    "- Maintain these personality traits (DO NOT EXPLICITLY MENTION IN TEXT) at all times during "
    "your conversation\n"
    "- Keep responses under 50 words\n"
    "- Maintain your personality consistently\n"
    "- Address previous arguments directly but do not repeat what the other speaker said.\n"
    "- End with proper punctuation";

constexpr const char* kDebaterUser = "Previous Argument:\"{previous}\"";

constexpr const char* kJudgeSystem =
    "Analyze text segments from two anonymous debaters (Person One and Person Two) for:\n"
    "1. Big Five Inventory (BFI) traits (High/Low for each dimension)\n"
    "2. Consistency with typical behavior for those traits (Yes/No)\n"
    "\n"
    "For each person, return:\n"
    "{\n"
    "    \"predicted_bfi\": {\n"
    "        \"Agreeableness\": \"High/Low\",\n"
    "        \"Openness\": \"High/Low\",\n"
    "        \"Conscientiousness\": \"High/Low\",\n"
    "        \"Extraversion\": \"High/Low\",\n"
    "        \"Neuroticism\": \"High/Low\"\n"
    "    }\n"
    "}\n";

constexpr const char* kJudgeUser = "Analyze {label}'s text:\n{text}";

// Placeholder syntax: {name} or {name:Arg}, name = [A-Za-z_][A-Za-z0-9_]*.
// Anything else between braces is literal text (the judge system prompt
// contains a literal JSON block).
struct Placeholder {
    std::size_t begin;  // index of '{'
    std::size_t end;    // index one past '}'
    std::string name;   // full slot text, e.g. "trait:Openness"
};

std::vector<Placeholder> scan_placeholders(const std::string& text) {
    std::vector<Placeholder> found;
    std::size_t pos = 0;
    while ((pos = text.find('{', pos)) != std::string::npos) {
        std::size_t cursor = pos + 1;
        auto is_name_char = [](char c) {
            return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                   c == '_' || c == ':';
        };
        if (cursor < text.size() &&
            ((text[cursor] >= 'a' && text[cursor] <= 'z') ||
             (text[cursor] >= 'A' && text[cursor] <= 'Z') || text[cursor] == '_')) {
            std::size_t name_end = cursor;
            while (name_end < text.size() && is_name_char(text[name_end])) ++name_end;
            if (name_end < text.size() && text[name_end] == '}') {
                found.push_back({pos, name_end + 1, text.substr(cursor, name_end - cursor)});
                pos = name_end + 1;
                continue;
            }
        }
        ++pos;
    }
    return found;
}

void check_placeholders(const std::string& text, const std::set<std::string>& allowed,
                        const std::string& which) {
    for (const auto& slot : scan_placeholders(text)) {
        if (!allowed.count(slot.name)) {
            throw TemplateError("unknown placeholder {" + slot.name + "} in " + which +
                                " template");
        }
    }
}

/// Single-pass substitution; substituted values are never rescanned.
std::string substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t last = 0;
    for (const auto& slot : scan_placeholders(tmpl)) {
        const auto it = values.find(slot.name);
        if (it == values.end()) continue;  // validated at load; unmatched stays literal
        out.append(tmpl, last, slot.begin - last);
        out.append(it->second);
        last = slot.end;
    }
    out.append(tmpl, last, std::string::npos);
    return out;
}

std::set<std::string> debater_system_slots() {
    std::set<std::string> allowed = {"topic"};
    for (TraitName trait : kAllTraits) allowed.insert("trait:" + to_string(trait));
    return allowed;
}

std::string read_template_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TemplateError("cannot open template file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

}  // namespace

PromptTemplates PromptTemplates::builtin() {
    PromptTemplates templates;
    templates.debater_system = kDebaterSystem;
    templates.debater_user = kDebaterUser;
    templates.judge_system = kJudgeSystem;
    templates.judge_user = kJudgeUser;
    templates.validate();
    return templates;
}

PromptTemplates PromptTemplates::load_dir(const std::string& dir) {
    PromptTemplates templates;
    templates.debater_system = read_template_file(dir + "/debater_system.txt");
    templates.debater_user = read_template_file(dir + "/debater_user.txt");
    templates.judge_system = read_template_file(dir + "/judge_system.txt");
    templates.judge_user = read_template_file(dir + "/judge_user.txt");
    templates.validate();
    return templates;
}

void PromptTemplates::validate() const {
    check_placeholders(debater_system, debater_system_slots(), "debater system");
    check_placeholders(debater_user, {"previous"}, "debater user");
    check_placeholders(judge_system, {}, "judge system");
    check_placeholders(judge_user, {"label", "text"}, "judge user");
}

std::string render_debater_system_prompt(const PromptTemplates& templates, const Topic& topic,
                                         const TraitProfile& profile) {
    std::map<std::string, std::string> values = {{"topic", topic.text}};
    for (TraitName trait : kAllTraits) {
        values["trait:" + to_string(trait)] = to_string(profile.level(trait));
    }
    return substitute(templates.debater_system, values);
}

std::string render_debater_user_prompt(const PromptTemplates& templates,
                                       const std::optional<std::string>& previous) {
    return substitute(templates.debater_user, {{"previous", previous.value_or("")}});
}

PromptPair render_judge_prompts(const PromptTemplates& templates,
                                const std::string& participant_label,
                                const std::string& participant_text) {
    if (trim(participant_text).empty()) {
        throw EmptyTextError("participant text for " + participant_label + " is empty");
    }
    PromptPair pair;
    pair.system = templates.judge_system;
    pair.user = substitute(templates.judge_user,
                           {{"label", participant_label}, {"text", participant_text}});
    return pair;
}

std::string participant_label(Speaker speaker) {
    return speaker == Speaker::P1 ? "Person One" : "Person Two";
}

}  // namespace traitlab
