#include "traitlab/discourse.hpp"

namespace traitlab {

std::string to_string(Speaker speaker) {
    return speaker == Speaker::P1 ? "P1" : "P2";
}

std::optional<Speaker> speaker_from_string(const std::string& text) {
    if (text == "P1") return Speaker::P1;
    if (text == "P2") return Speaker::P2;
    return std::nullopt;
}

nlohmann::json Utterance::to_json() const {
    return {
        {"index", index},
        {"speaker", to_string(speaker)},
        // Turn 0 got no previous argument; the log says so explicitly.
        {"opening", index == 0},
        {"raw_text", raw_text},
        {"clean_text", clean_text},
        {"word_count", word_count},
        {"violations", violations},
    };
}

Utterance Utterance::from_json(const nlohmann::json& j) {
    Utterance u;
    u.index = j.at("index").get<int>();
    const auto speaker = speaker_from_string(j.at("speaker").get<std::string>());
    if (!speaker) throw ConfigError("bad speaker: " + j.at("speaker").dump());
    u.speaker = *speaker;
    u.raw_text = j.at("raw_text").get<std::string>();
    u.clean_text = j.at("clean_text").get<std::string>();
    u.word_count = j.at("word_count").get<std::size_t>();
    u.violations = j.at("violations").get<std::vector<std::string>>();
    return u;
}

double SimilarityReport::flagged_adjacent_fraction(std::size_t utterance_count) const {
    if (utterance_count < 2) return 0.0;
    std::size_t flagged_adjacent = 0;
    for (const auto& [i, j] : flagged_pairs) {
        if (j == i + 1) ++flagged_adjacent;
    }
    return static_cast<double>(flagged_adjacent) / static_cast<double>(utterance_count - 1);
}

nlohmann::json SimilarityReport::to_json() const {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [key, score] : pair_scores) {
        pairs.push_back({{"i", key.first}, {"j", key.second}, {"score", score}});
    }
    nlohmann::json flagged = nlohmann::json::array();
    for (const auto& [i, j] : flagged_pairs) {
        flagged.push_back({{"i", i}, {"j", j}});
    }
    return {
        {"pair_scores", pairs},
        {"max_score", max_score},
        {"flagged_pairs", flagged},
        {"threshold", threshold},
    };
}

std::vector<const Utterance*> Discourse::utterances_for(Speaker speaker) const {
    std::vector<const Utterance*> result;
    for (const auto& utterance : utterances) {
        if (utterance.speaker == speaker) result.push_back(&utterance);
    }
    return result;
}

std::string Discourse::participant_text(Speaker speaker) const {
    std::string text;
    bool first = true;
    for (const auto* utterance : utterances_for(speaker)) {
        if (!first) text.push_back('\n');
        text += utterance->clean_text;
        first = false;
    }
    return text;
}

nlohmann::json Discourse::to_json() const {
    nlohmann::json utterance_array = nlohmann::json::array();
    for (const auto& utterance : utterances) utterance_array.push_back(utterance.to_json());
    nlohmann::json j = {
        {"schema_version", kSchemaVersion},
        {"id", id},
        {"config", config.to_json()},
        {"utterances", utterance_array},
        {"created_at", created_at},
        {"provider_ids", provider_ids},
        {"truncated", truncated},
    };
    if (failure) {
        j["failure"] = {{"turn", failure->turn}, {"error", failure->error}};
    }
    if (similarity_report) {
        j["similarity_report"] = similarity_report->to_json();
    }
    return j;
}

Discourse Discourse::from_json(const nlohmann::json& j) {
    Discourse d;
    d.id = j.at("id").get<std::string>();
    d.config = DebateConfig::from_json(j.at("config"));
    for (const auto& entry : j.at("utterances")) {
        d.utterances.push_back(Utterance::from_json(entry));
    }
    // Alternation and contiguity are re-checked on load.
    for (std::size_t i = 0; i < d.utterances.size(); ++i) {
        const auto& u = d.utterances[i];
        if (u.index != static_cast<int>(i)) {
            throw ConfigError("utterance index gap in discourse " + d.id);
        }
        const Speaker expected = (i % 2 == 0) ? Speaker::P1 : Speaker::P2;
        if (u.speaker != expected) {
            throw ConfigError("speaker alternation broken in discourse " + d.id);
        }
    }
    d.created_at = j.at("created_at").get<std::string>();
    d.provider_ids = j.at("provider_ids").get<std::map<std::string, std::string>>();
    d.truncated = j.at("truncated").get<bool>();
    if (j.contains("failure")) {
        d.failure = ProviderFailure{j.at("failure").at("turn").get<int>(),
                                    j.at("failure").at("error").get<std::string>()};
    }
    return d;
}

}  // namespace traitlab
