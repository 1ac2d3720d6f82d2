#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "traitlab/experiment.hpp"

namespace traitlab {

inline constexpr int kSchemaVersion = 1;

enum class Speaker { P1, P2 };

std::string to_string(Speaker speaker);
std::optional<Speaker> speaker_from_string(const std::string& text);

/// Violation tags recorded on utterances.
inline constexpr const char* kWordLimitExceeded = "WordLimitExceeded";
inline constexpr const char* kEmptyAfterSanitize = "EmptyAfterSanitize";

struct Utterance {
    int index = 0;
    Speaker speaker = Speaker::P1;
    std::string raw_text;
    std::string clean_text;
    std::size_t word_count = 0;
    std::vector<std::string> violations;

    nlohmann::json to_json() const;
    static Utterance from_json(const nlohmann::json& j);

    bool operator==(const Utterance&) const = default;
};

/// All-pairs similarity over one discourse's utterances.
struct SimilarityReport {
    std::map<std::pair<int, int>, double> pair_scores;  // (i, j) with i < j
    double max_score = 0.0;
    std::vector<std::pair<int, int>> flagged_pairs;     // score >= threshold
    double threshold = 0.9;

    /// Share of adjacent pairs (i, i+1) that are flagged; 0 when < 2 utterances.
    double flagged_adjacent_fraction(std::size_t utterance_count) const;

    nlohmann::json to_json() const;
};

struct ProviderFailure {
    int turn = 0;
    std::string error;

    bool operator==(const ProviderFailure&) const = default;
};

struct Discourse {
    std::string id;
    DebateConfig config;
    std::vector<Utterance> utterances;
    std::string created_at;
    std::map<std::string, std::string> provider_ids;  // "P1"/"P2" -> provider id
    bool truncated = false;
    std::optional<ProviderFailure> failure;
    std::optional<SimilarityReport> similarity_report;

    std::vector<const Utterance*> utterances_for(Speaker speaker) const;
    /// Clean utterances of one participant joined with newlines.
    std::string participant_text(Speaker speaker) const;

    nlohmann::json to_json() const;
    static Discourse from_json(const nlohmann::json& j);
};

}  // namespace traitlab
