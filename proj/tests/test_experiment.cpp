#include <doctest.h>

#include "traitlab/experiment.hpp"

using namespace traitlab;

namespace {

TraitProfile profile_from_mask(unsigned mask) {
    TraitProfile profile;
    for (std::size_t i = 0; i < kTraitCount; ++i) {
        profile.set_level(kAllTraits[i], (mask >> i) & 1 ? TraitLevel::High : TraitLevel::Low);
    }
    return profile;
}

}  // namespace

TEST_CASE("topics load from text with slug ids, skipping blank lines") {
    const auto topics = load_topics_text("Nuclear energy\n\n  \nSocial media harms?\n");
    REQUIRE(topics.size() == 2);
    CHECK(topics[0].id == "nuclear-energy");
    CHECK(topics[0].text == "Nuclear energy");
    CHECK(topics[1].id == "social-media-harms");
}

TEST_CASE("topics load from JSON strings and objects") {
    const nlohmann::json array = {"Space mining", {{"id", "t-custom"}, {"text", "Gene editing"}}};
    const auto topics = load_topics_json(array);
    REQUIRE(topics.size() == 2);
    CHECK(topics[0].id == "space-mining");
    CHECK(topics[1].id == "t-custom");
    CHECK(topics[1].text == "Gene editing");
}

TEST_CASE("an empty cross product is rejected") {
    const std::vector<Topic> topics = {{"t1", "Topic one"}};
    const std::vector<TraitCombo> no_combos;
    const std::vector<Topic> no_topics;
    const nlohmann::json one = {TraitProfile().to_json()};
    const auto combos = load_trait_combos(one, PairingPolicy::Mirror);
    CHECK_THROWS_AS(load_experiment_matrix(no_topics, combos, PairingPolicy::Mirror, 4,
                                           GenerationParams{}, "demo"),
                    EmptyInputError);
    CHECK_THROWS_AS(load_experiment_matrix(topics, no_combos, PairingPolicy::Mirror, 4,
                                           GenerationParams{}, "demo"),
                    EmptyInputError);
}

TEST_CASE("a single profile combo is mirrored onto both participants") {
    const nlohmann::json array = {profile_from_mask(5).to_json()};
    const auto combos = load_trait_combos(array, PairingPolicy::Mirror);
    REQUIRE(combos.size() == 1);
    CHECK(combos[0].id == "combo-001");
    CHECK(combos[0].mirrored);
    CHECK(combos[0].profile_p1 == combos[0].profile_p2);
    CHECK(combos[0].profile_p1 == profile_from_mask(5));
}

TEST_CASE("paired combos read p1/p2 and honor explicit ids") {
    const nlohmann::json array = {
        {{"id", "opposites"},
         {"p1", profile_from_mask(0).to_json()},
         {"p2", profile_from_mask(31).to_json()}},
        {{"p1", profile_from_mask(3).to_json()}, {"p2", profile_from_mask(3).to_json()}},
    };
    const auto combos = load_trait_combos(array, PairingPolicy::Paired);
    REQUIRE(combos.size() == 2);
    CHECK(combos[0].id == "opposites");
    CHECK(combos[0].profile_p1 == profile_from_mask(0));
    CHECK(combos[0].profile_p2 == profile_from_mask(31));
    CHECK(combos[1].id == "combo-002");
}

TEST_CASE("the experiment matrix is the topics-major cross product") {
    const std::vector<Topic> topics = {{"t1", "Topic one"}, {"t2", "Topic two"}};
    const nlohmann::json array = {profile_from_mask(1).to_json(), profile_from_mask(2).to_json()};
    const auto combos = load_trait_combos(array, PairingPolicy::Mirror);
    const auto matrix = load_experiment_matrix(topics, combos, PairingPolicy::Mirror, 4,
                                               GenerationParams{}, "demo");
    REQUIRE(matrix.size() == 4);
    CHECK(discourse_id_for(matrix[0]) == "t1__combo-001");
    CHECK(discourse_id_for(matrix[1]) == "t1__combo-002");
    CHECK(discourse_id_for(matrix[2]) == "t2__combo-001");
    CHECK(discourse_id_for(matrix[3]) == "t2__combo-002");
    for (const auto& config : matrix) {
        CHECK(config.turns_per_participant == 4);
        CHECK(config.pairing_label == "demo");
        CHECK_NOTHROW(config.validate());
    }
}

TEST_CASE("generation params default to the experiment settings") {
    const GenerationParams params;
    CHECK(params.temperature == doctest::Approx(0.9));
    CHECK(params.max_tokens == 150);
    CHECK(!params.seed.has_value());
}

TEST_CASE("debate config validation flags broken invariants") {
    DebateConfig config;
    config.topic = {"t1", "Topic"};
    config.combo_id = "c1";
    config.pairing_label = "demo";

    SUBCASE("valid as constructed") { CHECK_NOTHROW(config.validate()); }
    SUBCASE("turns must be positive") {
        config.turns_per_participant = 0;
        CHECK_THROWS_AS(config.validate(), ConfigError);
    }
    SUBCASE("topic text must be non-empty") {
        config.topic.text = "";
        CHECK_THROWS_AS(config.validate(), ConfigError);
    }
}

TEST_CASE("debate config survives a JSON round trip") {
    DebateConfig config;
    config.topic = {"t9", "Remote work is here to stay"};
    config.combo_id = "combo-007";
    config.profile_p1 = profile_from_mask(9);
    config.profile_p2 = profile_from_mask(22);
    config.turns_per_participant = 3;
    config.generation.temperature = 0.5;
    config.generation.seed = 1234;
    config.pairing_label = "alpha_vs_beta";

    const DebateConfig restored = DebateConfig::from_json(config.to_json());
    CHECK(restored == config);
}
