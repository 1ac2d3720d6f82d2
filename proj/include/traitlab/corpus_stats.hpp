#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "traitlab/discourse.hpp"

namespace traitlab {

/// Marker lists driving sentence classification; all matching is done on
/// lowercased tokens so the lists stay auditable as plain words.
struct CorpusRules {
    std::vector<std::string> abbreviations = {"e.g.", "i.e.", "etc.", "vs."};
    std::vector<std::string> stance_markers = {"is",      "must",  "should", "believe",
                                               "clearly", "argue", "cannot"};
    std::vector<std::string> connectives = {"if",   "then",      "because", "therefore",
                                            "thus", "hence", "however"};
};

struct CorpusStats {
    std::size_t total_dialogues = 0;
    std::size_t total_utterances = 0;
    std::size_t total_sentences = 0;
    std::size_t total_words = 0;
    std::size_t assertions = 0;
    std::size_t questions = 0;
    std::size_t logical_structures = 0;

    /// Absent when the denominator is zero.
    std::optional<double> avg_words_per_sentence() const;
    std::optional<double> avg_utterance_length() const;

    CorpusStats& operator+=(const CorpusStats& other);

    nlohmann::json to_json() const;

    bool operator==(const CorpusStats&) const = default;
};

/// Splits on '.', '!', '?' followed by whitespace or end of text; a
/// terminator completing an abbreviation ("e.g.", ...) does not split.
std::vector<std::string> split_sentences(const std::string& text, const CorpusRules& rules);

/// A sentence whose final non-quote character is '?'.
bool is_question(const std::string& sentence);
/// Ends '.' or '!' and contains at least one stance-marker token.
bool is_assertion(const std::string& sentence, const CorpusRules& rules);
/// Contains at least one connective token.
bool has_logical_structure(const std::string& sentence, const CorpusRules& rules);

/// Counts for one utterance's text (dialogue/utterance totals left at zero).
/// A word is a whitespace token containing at least one alphanumeric.
CorpusStats corpus_stats_for_text(const std::string& text, const CorpusRules& rules);

CorpusStats corpus_stats(const std::vector<Discourse>& discourses,
                         const CorpusRules& rules = {});

}  // namespace traitlab
