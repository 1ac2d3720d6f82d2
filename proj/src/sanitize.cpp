#include "traitlab/sanitize.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "traitlab/textutil.hpp"

namespace traitlab {

namespace {

bool is_tag_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

/// Parses a <name ...> or </name> marker starting at `pos`. Returns one past
/// the closing '>' and fills `name`, or npos when this is not a tag.
std::size_t parse_tag_marker(const std::string& text, std::size_t pos, std::string& name,
                             bool& closing) {
    std::size_t cursor = pos + 1;
    closing = false;
    if (cursor < text.size() && text[cursor] == '/') {
        closing = true;
        ++cursor;
    }
    if (cursor >= text.size() || !std::isalpha(static_cast<unsigned char>(text[cursor]))) {
        return std::string::npos;
    }
    std::size_t name_begin = cursor;
    while (cursor < text.size() && is_tag_name_char(text[cursor])) ++cursor;
    name = text.substr(name_begin, cursor - name_begin);
    while (cursor < text.size() && text[cursor] != '>' && text[cursor] != '<') ++cursor;
    if (cursor >= text.size() || text[cursor] != '>') return std::string::npos;
    return cursor + 1;
}

std::string strip_inline_tags(const std::string& text,
                              std::vector<std::pair<std::string, std::string>>& removed) {
    std::string out = text;
    std::size_t pos = 0;
    while ((pos = out.find('<', pos)) != std::string::npos) {
        std::string name;
        bool closing = false;
        const std::size_t marker_end = parse_tag_marker(out, pos, name, closing);
        if (marker_end == std::string::npos) {
            ++pos;
            continue;
        }
        std::size_t span_end = marker_end;
        if (!closing) {
            const std::string close_marker = "</" + name + ">";
            const std::size_t close_pos = out.find(close_marker, marker_end);
            if (close_pos != std::string::npos) span_end = close_pos + close_marker.size();
        }
        removed.emplace_back("inline_tag", out.substr(pos, span_end - pos));
        out.erase(pos, span_end - pos);
    }
    return out;
}

std::set<std::string> prompt_lines(const SanitizeContext& context) {
    std::set<std::string> lines;
    for (const std::string* prompt : {&context.system_prompt, &context.user_prompt}) {
        std::istringstream in(*prompt);
        std::string line;
        while (std::getline(in, line)) {
            const std::string trimmed = trim(line);
            if (!trimmed.empty()) lines.insert(trimmed);
        }
    }
    return lines;
}

std::string strip_prompt_echo(const std::string& text, const std::set<std::string>& echo_lines,
                              std::vector<std::pair<std::string, std::string>>& removed) {
    std::size_t offset = 0;
    while (offset < text.size()) {
        std::size_t line_end = text.find('\n', offset);
        const std::size_t next = line_end == std::string::npos ? text.size() : line_end + 1;
        const std::string line = text.substr(offset, (line_end == std::string::npos
                                                          ? text.size()
                                                          : line_end) - offset);
        const std::string trimmed = trim(line);
        if (trimmed.empty() || !echo_lines.count(trimmed)) break;
        removed.emplace_back("prompt_echo", line);
        offset = next;
    }
    return text.substr(offset);
}

std::string strip_role_prefixes(const std::string& text,
                                const std::vector<std::string>& prefixes,
                                std::vector<std::pair<std::string, std::string>>& removed) {
    for (const auto& prefix : prefixes) {
        if (prefix.empty() || text.size() < prefix.size()) continue;
        if (text.compare(0, prefix.size(), prefix) == 0) {
            std::size_t cut = prefix.size();
            while (cut < text.size() && (text[cut] == ' ' || text[cut] == '\t')) ++cut;
            removed.emplace_back("role_prefix", text.substr(0, cut));
            return text.substr(cut);
        }
    }
    return text;
}

}  // namespace

SanitizeResult sanitize_utterance(const std::string& raw, const SanitizeRules& rules,
                                  const SanitizeContext& context) {
    SanitizeResult result;
    const std::set<std::string> echo_lines =
        rules.strip_prompt_echo ? prompt_lines(context) : std::set<std::string>{};

    std::string text = raw;
    // Each changing pass strictly shrinks the text, so this terminates; the
    // fixed point makes sanitize idempotent.
    for (;;) {
        std::string previous = text;
        if (rules.strip_prompt_echo) text = strip_prompt_echo(text, echo_lines, result.removed);
        if (rules.strip_inline_tags) text = strip_inline_tags(text, result.removed);
        text = strip_role_prefixes(text, rules.drop_role_prefixes, result.removed);
        if (rules.trim_whitespace) text = trim(text);
        if (text == previous) break;
    }

    result.clean = std::move(text);
    result.empty_after_sanitize = result.clean.empty();
    return result;
}

}  // namespace traitlab
