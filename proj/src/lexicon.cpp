#include "traitlab/lexicon.hpp"

#include <fstream>

#include "traitlab/textutil.hpp"

namespace traitlab {

void TraitLexicon::validate() const {
    if (categories.empty() || markers.empty()) {
        throw LexiconError("lexicon needs at least one category and one marker");
    }
    for (const auto& [name, stems] : categories) {
        if (stems.empty()) throw LexiconError("lexicon category '" + name + "' has no stems");
    }
    for (const auto& [trait, trait_markers] : markers) {
        for (const auto& [category, weight] : trait_markers) {
            if (!categories.count(category)) {
                throw LexiconError("marker for " + to_string(trait) +
                                   " names unknown category '" + category + "'");
            }
            if (weight == 0.0) {
                throw LexiconError("marker (" + to_string(trait) + ", " + category +
                                   ") has zero weight");
            }
        }
    }
}

TraitLexicon TraitLexicon::from_json(const nlohmann::json& j) {
    TraitLexicon lexicon;
    if (!j.is_object() || !j.contains("categories") || !j.contains("markers")) {
        throw LexiconError("lexicon must be {\"categories\": ..., \"markers\": ...}");
    }
    for (const auto& [name, stems] : j.at("categories").items()) {
        std::vector<std::string> list;
        for (const auto& stem : stems) {
            list.push_back(lowercase_ascii(stem.get<std::string>()));
        }
        lexicon.categories[name] = std::move(list);
    }
    for (const auto& [key, trait_markers] : j.at("markers").items()) {
        const auto trait = trait_from_string(key);
        if (!trait) throw LexiconError("lexicon markers name unknown trait '" + key + "'");
        std::vector<std::pair<std::string, double>> list;
        for (const auto& marker : trait_markers) {
            if (!marker.is_array() || marker.size() != 2) {
                throw LexiconError("marker for " + key + " must be [category, weight]");
            }
            list.emplace_back(marker[0].get<std::string>(), marker[1].get<double>());
        }
        lexicon.markers[*trait] = std::move(list);
    }
    lexicon.validate();
    return lexicon;
}

TraitLexicon TraitLexicon::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LexiconError("cannot open lexicon file: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw LexiconError("lexicon file is not valid JSON: " + path);
    return from_json(j);
}

double category_token_share(const std::vector<std::string>& tokens, const TraitLexicon& lexicon,
                            const std::string& category) {
    if (tokens.empty()) return 0.0;
    const auto it = lexicon.categories.find(category);
    if (it == lexicon.categories.end()) return 0.0;
    std::size_t matched = 0;
    for (const auto& token : tokens) {
        for (const auto& stem : it->second) {
            if (token.size() >= stem.size() && token.compare(0, stem.size(), stem) == 0) {
                ++matched;
                break;
            }
        }
    }
    return static_cast<double>(matched) / static_cast<double>(tokens.size());
}

double lexicon_score(const std::string& text, const TraitLexicon& lexicon, TraitName trait) {
    const auto it = lexicon.markers.find(trait);
    if (it == lexicon.markers.end()) return 0.0;
    const std::vector<std::string> tokens = alnum_tokens(text);
    double score = 0.0;
    for (const auto& [category, weight] : it->second) {
        score += weight * category_token_share(tokens, lexicon, category);
    }
    return score;
}

std::optional<double> AlignmentCell::accuracy() const {
    if (predicted == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(predicted);
}

double AlignmentCell::abstention_rate() const {
    if (items == 0) return 0.0;
    return static_cast<double>(abstained) / static_cast<double>(items);
}

std::vector<AlignmentCell> lexicon_alignment(const std::vector<Discourse>& discourses,
                                             const TraitLexicon& lexicon) {
    lexicon.validate();
    if (discourses.empty()) throw LexiconError("no discourses to score");

    std::map<std::tuple<std::string, Speaker, TraitName>, AlignmentCell> cells;
    for (const auto& discourse : discourses) {
        for (const Speaker participant : {Speaker::P1, Speaker::P2}) {
            const std::string text = discourse.participant_text(participant);
            const TraitProfile& assigned = participant == Speaker::P1
                                               ? discourse.config.profile_p1
                                               : discourse.config.profile_p2;
            for (const TraitName trait : kAllTraits) {
                auto& cell = cells[{discourse.config.pairing_label, participant, trait}];
                cell.pairing_label = discourse.config.pairing_label;
                cell.participant = participant;
                cell.trait = trait;
                if (!lexicon.markers.count(trait)) {
                    cell.scored = false;
                    continue;
                }
                ++cell.items;
                const double score = lexicon_score(text, lexicon, trait);
                if (score == 0.0) {
                    ++cell.abstained;
                    continue;
                }
                ++cell.predicted;
                const TraitLevel predicted = score > 0.0 ? TraitLevel::High : TraitLevel::Low;
                if (predicted == assigned.level(trait)) ++cell.correct;
            }
        }
    }

    std::vector<AlignmentCell> result;
    result.reserve(cells.size());
    for (auto& [key, cell] : cells) result.push_back(std::move(cell));
    return result;
}

}  // namespace traitlab
