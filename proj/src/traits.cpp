#include "traitlab/traits.hpp"

#include <algorithm>
#include <cctype>

namespace traitlab {

namespace {

std::string lowercase(const std::string& text) {
    std::string out = text;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string to_string(TraitName trait) {
    switch (trait) {
        case TraitName::Agreeableness: return "Agreeableness";
        case TraitName::Openness: return "Openness";
        case TraitName::Conscientiousness: return "Conscientiousness";
        case TraitName::Extraversion: return "Extraversion";
        case TraitName::Neuroticism: return "Neuroticism";
    }
    return "?";
}

std::optional<TraitName> trait_from_string(const std::string& name) {
    for (TraitName trait : kAllTraits) {
        if (to_string(trait) == name) return trait;
    }
    return std::nullopt;
}

std::string to_string(TraitLevel level) {
    return level == TraitLevel::High ? "High" : "Low";
}

std::optional<TraitLevel> level_from_string(const std::string& text) {
    const std::string lower = lowercase(text);
    if (lower == "high") return TraitLevel::High;
    if (lower == "low") return TraitLevel::Low;
    return std::nullopt;
}

nlohmann::json TraitProfile::to_json() const {
    nlohmann::json out = nlohmann::json::object();
    for (TraitName trait : kAllTraits) {
        out[to_string(trait)] = to_string(level(trait));
    }
    return out;
}

TraitParseError::TraitParseError(Kind kind, std::string element)
    : std::runtime_error([&] {
          switch (kind) {
              case Kind::MissingTrait: return "missing trait: " + element;
              case Kind::UnknownTrait: return "unknown trait key: " + element;
              case Kind::InvalidLevel: return "invalid trait level: " + element;
          }
          return std::string("trait parse error");
      }()),
      kind_(kind),
      element_(std::move(element)) {}

TraitProfile parse_trait_profile(const nlohmann::json& raw) {
    if (!raw.is_object()) {
        throw TraitParseError(TraitParseError::Kind::UnknownTrait, raw.dump());
    }
    TraitProfile profile;
    std::array<bool, kTraitCount> seen{};
    for (const auto& [key, value] : raw.items()) {
        const auto trait = trait_from_string(key);
        if (!trait) {
            throw TraitParseError(TraitParseError::Kind::UnknownTrait, key);
        }
        if (!value.is_string()) {
            throw TraitParseError(TraitParseError::Kind::InvalidLevel, value.dump());
        }
        const auto level = level_from_string(value.get<std::string>());
        if (!level) {
            throw TraitParseError(TraitParseError::Kind::InvalidLevel, value.get<std::string>());
        }
        profile.set_level(*trait, *level);
        seen[static_cast<std::size_t>(*trait)] = true;
    }
    for (TraitName trait : kAllTraits) {
        if (!seen[static_cast<std::size_t>(trait)]) {
            throw TraitParseError(TraitParseError::Kind::MissingTrait, to_string(trait));
        }
    }
    return profile;
}

}  // namespace traitlab
