#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "traitlab/traits.hpp"

namespace traitlab {

struct Topic {
    std::string id;
    std::string text;

    bool operator==(const Topic&) const = default;
};

struct GenerationParams {
    double temperature = 0.9;
    int max_tokens = 150;
    std::optional<long long> seed;

    bool operator==(const GenerationParams&) const = default;
};

/// One trait assignment pair for a debate. `mirrored` records that both
/// participants share the same profile.
struct TraitCombo {
    std::string id;
    TraitProfile profile_p1;
    TraitProfile profile_p2;
    bool mirrored = false;

    bool operator==(const TraitCombo&) const = default;
};

enum class PairingPolicy { Paired, Mirror };

struct DebateConfig {
    Topic topic;
    std::string combo_id;
    TraitProfile profile_p1;
    TraitProfile profile_p2;
    int turns_per_participant = 4;
    GenerationParams generation;
    std::string pairing_label;

    /// Throws ConfigError when an invariant is broken.
    void validate() const;

    nlohmann::json to_json() const;
    static DebateConfig from_json(const nlohmann::json& j);

    bool operator==(const DebateConfig&) const = default;
};

/// Configuration-level failures; the CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class EmptyInputError : public ConfigError {
public:
    explicit EmptyInputError(const std::string& what) : ConfigError(what) {}
};

/// Topics from a UTF-8 text file (one per line) or a JSON array of strings
/// or {id, text} objects. Bare strings get slugified ids.
std::vector<Topic> load_topics_text(const std::string& content);
std::vector<Topic> load_topics_json(const nlohmann::json& array);
std::vector<Topic> load_topics_file(const std::string& path);

/// Combos from a JSON array. Each element is either a single profile object
/// (mirrored pair) or {"p1": {...}, "p2": {...}}; an optional "id" key names
/// the combo, otherwise ids are combo-001, combo-002, ...
std::vector<TraitCombo> load_trait_combos(const nlohmann::json& array, PairingPolicy policy);
std::vector<TraitCombo> load_trait_combos_file(const std::string& path, PairingPolicy policy);

/// Deterministic topics-major cross product; |result| = |topics| x |combos|.
std::vector<DebateConfig> load_experiment_matrix(const std::vector<Topic>& topics,
                                                 const std::vector<TraitCombo>& combos,
                                                 PairingPolicy policy,
                                                 int turns_per_participant,
                                                 const GenerationParams& generation,
                                                 const std::string& pairing_label);

std::string discourse_id_for(const DebateConfig& config);

}  // namespace traitlab
