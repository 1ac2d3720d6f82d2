#include "traitlab/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "traitlab/textutil.hpp"

namespace traitlab {

namespace {

std::string read_file_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string padded_combo_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "combo-%03zu", index + 1);
    return buf;
}

void check_unique_ids(const std::vector<Topic>& topics) {
    std::set<std::string> seen;
    for (const auto& topic : topics) {
        if (!seen.insert(topic.id).second) {
            throw ConfigError("duplicate topic id: " + topic.id);
        }
    }
}

}  // namespace

void DebateConfig::validate() const {
    if (topic.text.empty()) throw ConfigError("topic text is empty");
    if (topic.id.empty()) throw ConfigError("topic id is empty");
    if (turns_per_participant < 1) throw ConfigError("turns_per_participant must be >= 1");
    if (generation.temperature < 0.0 || generation.temperature > 2.0) {
        throw ConfigError("temperature out of range [0, 2]");
    }
    if (generation.max_tokens < 1) throw ConfigError("max_tokens must be positive");
}

nlohmann::json DebateConfig::to_json() const {
    nlohmann::json j = {
        {"topic", {{"id", topic.id}, {"text", topic.text}}},
        {"combo_id", combo_id},
        {"profile_p1", profile_p1.to_json()},
        {"profile_p2", profile_p2.to_json()},
        {"turns_per_participant", turns_per_participant},
        {"generation",
         {{"temperature", generation.temperature}, {"max_tokens", generation.max_tokens}}},
        {"pairing_label", pairing_label},
    };
    if (generation.seed) j["generation"]["seed"] = *generation.seed;
    return j;
}

DebateConfig DebateConfig::from_json(const nlohmann::json& j) {
    DebateConfig config;
    config.topic.id = j.at("topic").at("id").get<std::string>();
    config.topic.text = j.at("topic").at("text").get<std::string>();
    config.combo_id = j.at("combo_id").get<std::string>();
    config.profile_p1 = parse_trait_profile(j.at("profile_p1"));
    config.profile_p2 = parse_trait_profile(j.at("profile_p2"));
    config.turns_per_participant = j.at("turns_per_participant").get<int>();
    config.generation.temperature = j.at("generation").at("temperature").get<double>();
    config.generation.max_tokens = j.at("generation").at("max_tokens").get<int>();
    if (j.at("generation").contains("seed")) {
        config.generation.seed = j.at("generation").at("seed").get<long long>();
    }
    config.pairing_label = j.at("pairing_label").get<std::string>();
    return config;
}

std::vector<Topic> load_topics_text(const std::string& content) {
    std::vector<Topic> topics;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        const std::string text = trim(line);
        if (text.empty()) continue;
        topics.push_back(Topic{slugify(text), text});
    }
    check_unique_ids(topics);
    return topics;
}

std::vector<Topic> load_topics_json(const nlohmann::json& array) {
    if (!array.is_array()) throw ConfigError("topics JSON must be an array");
    std::vector<Topic> topics;
    for (const auto& entry : array) {
        if (entry.is_string()) {
            const std::string text = trim(entry.get<std::string>());
            if (text.empty()) throw ConfigError("topic text is empty");
            topics.push_back(Topic{slugify(text), text});
        } else if (entry.is_object()) {
            Topic topic;
            topic.text = trim(entry.at("text").get<std::string>());
            topic.id = entry.contains("id") ? entry.at("id").get<std::string>() : slugify(topic.text);
            if (topic.text.empty()) throw ConfigError("topic text is empty");
            topics.push_back(std::move(topic));
        } else {
            throw ConfigError("topic entry must be a string or object");
        }
    }
    check_unique_ids(topics);
    return topics;
}

std::vector<Topic> load_topics_file(const std::string& path) {
    const std::string content = read_file_or_throw(path);
    const std::string trimmed = trim(content);
    if (!trimmed.empty() && trimmed.front() == '[') {
        return load_topics_json(nlohmann::json::parse(content));
    }
    return load_topics_text(content);
}

std::vector<TraitCombo> load_trait_combos(const nlohmann::json& array, PairingPolicy policy) {
    if (!array.is_array()) throw ConfigError("trait combos JSON must be an array");
    std::vector<TraitCombo> combos;
    for (std::size_t i = 0; i < array.size(); ++i) {
        const auto& entry = array[i];
        if (!entry.is_object()) throw ConfigError("trait combo entry must be an object");
        TraitCombo combo;
        combo.id = entry.contains("id") ? entry.at("id").get<std::string>() : padded_combo_id(i);
        if (entry.contains("p1") || entry.contains("p2")) {
            combo.profile_p1 = parse_trait_profile(entry.at("p1"));
            combo.profile_p2 = parse_trait_profile(entry.at("p2"));
            if (policy == PairingPolicy::Mirror) {
                combo.profile_p2 = combo.profile_p1;
                combo.mirrored = true;
            }
        } else {
            nlohmann::json profile = entry;
            profile.erase("id");
            combo.profile_p1 = parse_trait_profile(profile);
            combo.profile_p2 = combo.profile_p1;
            combo.mirrored = true;
        }
        combos.push_back(std::move(combo));
    }
    return combos;
}

std::vector<TraitCombo> load_trait_combos_file(const std::string& path, PairingPolicy policy) {
    return load_trait_combos(nlohmann::json::parse(read_file_or_throw(path)), policy);
}

std::vector<DebateConfig> load_experiment_matrix(const std::vector<Topic>& topics,
                                                 const std::vector<TraitCombo>& combos,
                                                 PairingPolicy policy,
                                                 int turns_per_participant,
                                                 const GenerationParams& generation,
                                                 const std::string& pairing_label) {
    if (topics.empty()) throw EmptyInputError("no topics");
    if (combos.empty()) throw EmptyInputError("no trait combos");
    std::vector<DebateConfig> matrix;
    matrix.reserve(topics.size() * combos.size());
    for (const auto& topic : topics) {
        for (const auto& combo : combos) {
            DebateConfig config;
            config.topic = topic;
            config.combo_id = combo.id;
            config.profile_p1 = combo.profile_p1;
            config.profile_p2 =
                policy == PairingPolicy::Mirror ? combo.profile_p1 : combo.profile_p2;
            config.turns_per_participant = turns_per_participant;
            config.generation = generation;
            config.pairing_label = pairing_label;
            config.validate();
            matrix.push_back(std::move(config));
        }
    }
    return matrix;
}

std::string discourse_id_for(const DebateConfig& config) {
    return config.topic.id + "__" + config.combo_id;
}

}  // namespace traitlab
