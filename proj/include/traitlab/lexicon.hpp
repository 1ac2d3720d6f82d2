#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "traitlab/discourse.hpp"
#include "traitlab/traits.hpp"

namespace traitlab {

class LexiconError : public ConfigError {
public:
    explicit LexiconError(const std::string& what) : ConfigError(what) {}
};

/// Word-category dictionary plus per-trait markers. A positive marker weight
/// signals High, a negative one Low. Stems match by prefix ("friend" matches
/// "friendly").
struct TraitLexicon {
    std::map<std::string, std::vector<std::string>> categories;  // name -> lowercase stems
    std::map<TraitName, std::vector<std::pair<std::string, double>>> markers;

    /// Throws LexiconError: empty dictionary, marker naming an unknown
    /// category, or a zero weight.
    void validate() const;

    static TraitLexicon from_json(const nlohmann::json& j);
    static TraitLexicon load_file(const std::string& path);
};

/// Share of `tokens` matching any stem of `category` (prefix match).
double category_token_share(const std::vector<std::string>& tokens, const TraitLexicon& lexicon,
                            const std::string& category);

/// Sum over the trait's markers of weight x category token share; 0 for a
/// trait with no markers or for empty text.
double lexicon_score(const std::string& text, const TraitLexicon& lexicon, TraitName trait);

/// Accuracy of lexicon predictions for one (pairing, participant, trait)
/// cell. Abstentions (score exactly 0) stay out of the denominator.
struct AlignmentCell {
    std::string pairing_label;
    Speaker participant = Speaker::P1;
    TraitName trait = TraitName::Agreeableness;
    bool scored = true;  // false when the lexicon has no markers for the trait
    std::size_t items = 0;
    std::size_t predicted = 0;  // non-abstained
    std::size_t correct = 0;
    std::size_t abstained = 0;

    std::optional<double> accuracy() const;
    double abstention_rate() const;
};

/// Scores every (discourse, participant, trait) against the assigned
/// profiles: predicted High when score > 0, Low when score < 0, abstain at 0.
std::vector<AlignmentCell> lexicon_alignment(const std::vector<Discourse>& discourses,
                                             const TraitLexicon& lexicon);

}  // namespace traitlab
