#include <doctest.h>

#include <random>

#include "traitlab/similarity.hpp"

using namespace traitlab;

namespace {

Discourse with_utterances(const std::vector<std::string>& texts) {
    Discourse discourse;
    discourse.id = "sim-test";
    for (std::size_t i = 0; i < texts.size(); ++i) {
        Utterance u;
        u.index = static_cast<int>(i);
        u.speaker = (i % 2 == 0) ? Speaker::P1 : Speaker::P2;
        u.clean_text = texts[i];
        discourse.utterances.push_back(std::move(u));
    }
    return discourse;
}

}  // namespace

TEST_CASE("identical non-empty texts score 1.0") {
    const std::string text = "Nuclear baseload keeps the grid stable.";
    CHECK(tf_cosine_similarity(text, text, default_stopwords()) == doctest::Approx(1.0));
}

TEST_CASE("texts with no shared tokens score 0.0") {
    CHECK(tf_cosine_similarity("alpha beta", "gamma delta", default_stopwords()) == 0.0);
}

TEST_CASE("the hand-computed cosine comes out to exactly 0.75") {
    const std::set<std::string> stopwords = {"is"};
    const double score =
        tf_cosine_similarity("nuclear energy is safe today", "nuclear energy is clean today",
                             stopwords);
    CHECK(score == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("similarity is symmetric") {
    std::mt19937 rng(99);
    const std::vector<std::string> vocabulary = {"wind",  "solar", "grid", "cost",
                                                 "is",    "the",   "and",  "storage",
                                                 "scale", "nuclear"};
    std::uniform_int_distribution<std::size_t> pick(0, vocabulary.size() - 1);
    std::uniform_int_distribution<int> length(0, 12);
    for (int i = 0; i < 200; ++i) {
        std::string a;
        std::string b;
        for (int k = length(rng); k > 0; --k) a += vocabulary[pick(rng)] + " ";
        for (int k = length(rng); k > 0; --k) b += vocabulary[pick(rng)] + " ";
        const double ab = tf_cosine_similarity(a, b, default_stopwords());
        const double ba = tf_cosine_similarity(b, a, default_stopwords());
        CHECK(ab == ba);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0 + 1e-12);
    }
}

TEST_CASE("texts that are pure stopwords fall back to token equality") {
    const auto& stopwords = default_stopwords();
    CHECK(tf_cosine_similarity("is the and", "is the and", stopwords) == 1.0);
    CHECK(tf_cosine_similarity("is the", "and or", stopwords) == 0.0);
    CHECK(tf_cosine_similarity("", "", stopwords) == 0.0);
    CHECK(tf_cosine_similarity("is", "wind power", stopwords) == 0.0);
}

TEST_CASE("case and punctuation do not affect the score") {
    CHECK(tf_cosine_similarity("Wind Power Wins!", "wind power wins",
                               default_stopwords()) == doctest::Approx(1.0));
}

TEST_CASE("the screen scores every pair and flags at the threshold inclusively") {
    const Discourse discourse = with_utterances(
        {"wind power wins", "solar looks better", "wind power wins", "storage fixes gaps"});
    const SimilarityReport report = similarity_screen(discourse, 0.9);

    CHECK(report.pair_scores.size() == 6);  // C(4,2)
    CHECK(report.threshold == 0.9);
    CHECK(report.max_score == doctest::Approx(1.0));
    REQUIRE(report.flagged_pairs.size() == 1);
    CHECK(report.flagged_pairs[0] == std::make_pair(0, 2));

    // A score exactly at the threshold is flagged.
    const SimilarityReport exact = similarity_screen(discourse, 1.0);
    CHECK(exact.flagged_pairs.size() == 1);
}

TEST_CASE("short discourses produce empty reports") {
    CHECK(similarity_screen(with_utterances({}), 0.9).pair_scores.empty());
    const SimilarityReport one = similarity_screen(with_utterances({"only line"}), 0.9);
    CHECK(one.pair_scores.empty());
    CHECK(one.max_score == 0.0);
    CHECK(one.flagged_adjacent_fraction(1) == 0.0);
}

TEST_CASE("the adjacent-pair fraction counts only neighboring flags") {
    const Discourse discourse = with_utterances(
        {"same words here", "same words here", "different text now", "same words here"});
    const SimilarityReport report = similarity_screen(discourse, 0.9);
    // Flagged pairs: (0,1), (0,3), (1,3); only (0,1) is adjacent; 3 adjacent slots.
    CHECK(report.flagged_pairs.size() == 3);
    CHECK(report.flagged_adjacent_fraction(4) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("a fully repetitive discourse crosses the degenerate threshold") {
    const Discourse discourse =
        with_utterances({"the same point", "the same point", "the same point"});
    const SimilarityReport report = similarity_screen(discourse, 0.9);
    CHECK(report.flagged_adjacent_fraction(3) >= 0.30);
}
