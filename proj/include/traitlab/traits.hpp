#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace traitlab {

/// The five OCEAN dimensions. Iteration order is fixed and matches the
/// order the debater prompt lists them in.
enum class TraitName { Agreeableness, Openness, Conscientiousness, Extraversion, Neuroticism };

inline constexpr std::array<TraitName, 5> kAllTraits = {
    TraitName::Agreeableness, TraitName::Openness, TraitName::Conscientiousness,
    TraitName::Extraversion, TraitName::Neuroticism};

inline constexpr std::size_t kTraitCount = kAllTraits.size();

std::string to_string(TraitName trait);
std::optional<TraitName> trait_from_string(const std::string& name);

enum class TraitLevel { High, Low };

std::string to_string(TraitLevel level);
/// Case-insensitive. Returns nullopt for anything that is not "high"/"low".
std::optional<TraitLevel> level_from_string(const std::string& text);

/// A complete High/Low assignment for all five traits.
class TraitProfile {
public:
    TraitProfile() : levels_{TraitLevel::High, TraitLevel::High, TraitLevel::High,
                             TraitLevel::High, TraitLevel::High} {}

    TraitLevel level(TraitName trait) const { return levels_[index(trait)]; }
    void set_level(TraitName trait, TraitLevel level) { levels_[index(trait)] = level; }

    nlohmann::json to_json() const;

    bool operator==(const TraitProfile&) const = default;

private:
    static std::size_t index(TraitName trait) { return static_cast<std::size_t>(trait); }
    std::array<TraitLevel, kTraitCount> levels_;
};

class TraitParseError : public std::runtime_error {
public:
    enum class Kind { MissingTrait, UnknownTrait, InvalidLevel };

    TraitParseError(Kind kind, std::string element);

    Kind kind() const { return kind_; }
    /// The offending element: trait name, unknown key, or bad level value.
    const std::string& element() const { return element_; }

private:
    Kind kind_;
    std::string element_;
};

/// Parses a {"Agreeableness": "High", ...} object into a TraitProfile.
/// All five traits must be present exactly once; levels are case-insensitive;
/// unknown keys are rejected.
TraitProfile parse_trait_profile(const nlohmann::json& raw);

}  // namespace traitlab
