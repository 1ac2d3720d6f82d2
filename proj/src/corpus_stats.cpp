#include "traitlab/corpus_stats.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "traitlab/textutil.hpp"

namespace traitlab {

namespace {

bool is_quote(char c) { return c == '"' || c == '\''; }

/// True when the text up to and including position `dot` ends with an
/// abbreviation on a word boundary.
bool ends_with_abbreviation(const std::string& text, std::size_t dot, const CorpusRules& rules) {
    for (const auto& abbreviation : rules.abbreviations) {
        const std::size_t len = abbreviation.size();
        if (len == 0 || dot + 1 < len) continue;
        const std::size_t start = dot + 1 - len;
        bool match = true;
        for (std::size_t i = 0; i < len; ++i) {
            if (std::tolower(static_cast<unsigned char>(text[start + i])) !=
                std::tolower(static_cast<unsigned char>(abbreviation[i]))) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        if (start == 0 || std::isspace(static_cast<unsigned char>(text[start - 1])) ||
            text[start - 1] == '(') {
            return true;
        }
    }
    return false;
}

bool contains_marker_token(const std::string& sentence, const std::vector<std::string>& markers) {
    const std::set<std::string> marker_set(markers.begin(), markers.end());
    for (const auto& token : alnum_tokens(sentence)) {
        if (marker_set.count(token)) return true;
    }
    return false;
}

char final_non_quote(const std::string& sentence) {
    for (auto it = sentence.rbegin(); it != sentence.rend(); ++it) {
        if (!is_quote(*it) && !std::isspace(static_cast<unsigned char>(*it))) return *it;
    }
    return '\0';
}

}  // namespace

std::optional<double> CorpusStats::avg_words_per_sentence() const {
    if (total_sentences == 0) return std::nullopt;
    return static_cast<double>(total_words) / static_cast<double>(total_sentences);
}

std::optional<double> CorpusStats::avg_utterance_length() const {
    if (total_utterances == 0) return std::nullopt;
    return static_cast<double>(total_words) / static_cast<double>(total_utterances);
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& other) {
    total_dialogues += other.total_dialogues;
    total_utterances += other.total_utterances;
    total_sentences += other.total_sentences;
    total_words += other.total_words;
    assertions += other.assertions;
    questions += other.questions;
    logical_structures += other.logical_structures;
    return *this;
}

nlohmann::json CorpusStats::to_json() const {
    nlohmann::json j = {
        {"total_dialogues", total_dialogues},
        {"total_utterances", total_utterances},
        {"total_sentences", total_sentences},
        {"total_words", total_words},
        {"assertions", assertions},
        {"questions", questions},
        {"logical_structures", logical_structures},
    };
    if (const auto avg = avg_words_per_sentence()) j["avg_words_per_sentence"] = *avg;
    if (const auto avg = avg_utterance_length()) j["avg_utterance_length"] = *avg;
    return j;
}

std::vector<std::string> split_sentences(const std::string& text, const CorpusRules& rules) {
    std::vector<std::string> sentences;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        current.push_back(c);
        if (c != '.' && c != '!' && c != '?') continue;
        const bool at_boundary =
            i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]));
        if (!at_boundary) continue;
        if (c == '.' && ends_with_abbreviation(text, i, rules)) continue;
        const std::string sentence = trim(current);
        if (!sentence.empty()) sentences.push_back(sentence);
        current.clear();
    }
    const std::string tail = trim(current);
    if (!tail.empty()) sentences.push_back(tail);
    return sentences;
}

bool is_question(const std::string& sentence) { return final_non_quote(sentence) == '?'; }

bool is_assertion(const std::string& sentence, const CorpusRules& rules) {
    const char last = final_non_quote(sentence);
    if (last != '.' && last != '!') return false;
    return contains_marker_token(sentence, rules.stance_markers);
}

bool has_logical_structure(const std::string& sentence, const CorpusRules& rules) {
    return contains_marker_token(sentence, rules.connectives);
}

CorpusStats corpus_stats_for_text(const std::string& text, const CorpusRules& rules) {
    CorpusStats stats;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        bool has_alnum = false;
        for (const char c : token) {
            if (std::isalnum(static_cast<unsigned char>(c))) {
                has_alnum = true;
                break;
            }
        }
        if (has_alnum) ++stats.total_words;
    }
    for (const auto& sentence : split_sentences(text, rules)) {
        ++stats.total_sentences;
        if (is_question(sentence)) ++stats.questions;
        if (is_assertion(sentence, rules)) ++stats.assertions;
        if (has_logical_structure(sentence, rules)) ++stats.logical_structures;
    }
    return stats;
}

CorpusStats corpus_stats(const std::vector<Discourse>& discourses, const CorpusRules& rules) {
    CorpusStats stats;
    for (const auto& discourse : discourses) {
        ++stats.total_dialogues;
        for (const auto& utterance : discourse.utterances) {
            ++stats.total_utterances;
            stats += corpus_stats_for_text(utterance.clean_text, rules);
        }
    }
    return stats;
}

}  // namespace traitlab
