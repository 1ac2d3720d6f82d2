#include <doctest.h>

#include "traitlab/corpus_stats.hpp"

using namespace traitlab;

namespace {

Discourse discourse_with_texts(const std::vector<std::string>& texts) {
    Discourse discourse;
    discourse.config.topic = {"t1", "Topic one"};
    discourse.config.combo_id = "combo-001";
    discourse.config.pairing_label = "a_vs_b";
    discourse.id = discourse_id_for(discourse.config);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        Utterance u;
        u.index = static_cast<int>(i);
        u.speaker = i % 2 == 0 ? Speaker::P1 : Speaker::P2;
        u.raw_text = u.clean_text = texts[i];
        discourse.utterances.push_back(u);
    }
    return discourse;
}

}  // namespace

TEST_CASE("the two-sentence hand example counts out exactly") {
    const CorpusRules rules;
    const CorpusStats stats = corpus_stats_for_text("Is it safe? It is.", rules);
    CHECK(stats.total_sentences == 2);
    CHECK(stats.total_words == 5);
    CHECK(stats.questions == 1);
    CHECK(stats.assertions == 1);  // "It is." carries the stance token "is"
    CHECK(stats.logical_structures == 0);
    CHECK(*stats.avg_words_per_sentence() == 2.5);

    const CorpusStats whole = corpus_stats({discourse_with_texts({"Is it safe? It is."})});
    CHECK(whole.total_dialogues == 1);
    CHECK(whole.total_utterances == 1);
    CHECK(whole.total_sentences == 2);
    CHECK(*whole.avg_utterance_length() == 5.0);
}

TEST_CASE("sentence splitting respects terminators and abbreviations") {
    const CorpusRules rules;
    CHECK(split_sentences("One. Two! Three?", rules) ==
          std::vector<std::string>{"One.", "Two!", "Three?"});
    CHECK(split_sentences("Use solar, e.g. rooftop panels. It works.", rules) ==
          std::vector<std::string>{"Use solar, e.g. rooftop panels.", "It works."});
    CHECK(split_sentences("Costs fell, i.e. panels got cheap. Good.", rules).size() == 2);
    CHECK(split_sentences("Wind vs. solar is a false choice.", rules).size() == 1);
    CHECK(split_sentences("E.g. this one.", rules) == std::vector<std::string>{"E.g. this one."});

    // An abbreviation match needs a word boundary on its left.
    CHECK(split_sentences("They ran convs. Results follow.", rules).size() == 2);

    // A terminator not followed by whitespace does not split.
    CHECK(split_sentences("Version 2.5 shipped today.", rules).size() == 1);

    // Ellipses split at the last dot of the run.
    CHECK(split_sentences("Wait... what?", rules) ==
          std::vector<std::string>{"Wait...", "what?"});

    // Unterminated tails still count as a sentence.
    CHECK(split_sentences("an unfinished thought", rules) ==
          std::vector<std::string>{"an unfinished thought"});
    CHECK(split_sentences("   ", rules).empty());
}

TEST_CASE("questions are recognized through trailing quotes") {
    CHECK(is_question("Is it safe?"));
    CHECK(is_question("She asked, \"Is it safe?\""));
    CHECK(is_question("Really?'"));
    CHECK(!is_question("It is safe."));
    CHECK(!is_question("Is it safe? Maybe"));
    CHECK(!is_question(""));
}

TEST_CASE("assertions need a declarative ending and a stance token") {
    const CorpusRules rules;
    CHECK(is_assertion("We must act.", rules));
    CHECK(is_assertion("Clearly!", rules));
    CHECK(is_assertion("That is settled.\"", rules));
    CHECK(!is_assertion("We act.", rules));
    CHECK(!is_assertion("Is it safe?", rules));      // interrogative ending
    CHECK(!is_assertion("Thistles bloom.", rules));  // "is" must match a whole token
}

TEST_CASE("logical structures hinge on connective tokens") {
    const CorpusRules rules;
    CHECK(has_logical_structure("If we wait, costs rise.", rules));
    CHECK(has_logical_structure("Delay hurts because supply lags.", rules));
    CHECK(has_logical_structure("However, the data disagrees.", rules));
    CHECK(!has_logical_structure("Costs rise.", rules));
    CHECK(!has_logical_structure("The sheriff was thusly informed.", rules));
}

TEST_CASE("a word is a whitespace token with at least one alphanumeric") {
    const CorpusRules rules;
    CHECK(corpus_stats_for_text("Well -- yes.", rules).total_words == 2);
    CHECK(corpus_stats_for_text("It is 42.", rules).total_words == 3);
    CHECK(corpus_stats_for_text("!!! ??? ...", rules).total_words == 0);
}

TEST_CASE("stats are additive over disjoint partitions") {
    const std::vector<std::string> texts = {
        "Is it safe? It is.",
        "We should act because delay hurts.",
        "However, the numbers say otherwise. Look again!",
        "Nothing conclusive here",
        "If demand grows, prices follow. Ask anyone.",
        "Fine.",
    };
    const CorpusRules rules;
    CorpusStats whole;
    CorpusStats left;
    CorpusStats right;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        whole += corpus_stats_for_text(texts[i], rules);
        (i < 3 ? left : right) += corpus_stats_for_text(texts[i], rules);
    }
    CorpusStats sum = left;
    sum += right;
    CHECK(sum == whole);

    const Discourse a = discourse_with_texts({texts[0], texts[1]});
    const Discourse b = discourse_with_texts({texts[2]});
    CorpusStats merged = corpus_stats({a});
    merged += corpus_stats({b});
    CHECK(merged == corpus_stats({a, b}));
    CHECK(merged.total_dialogues == 2);
    CHECK(merged.total_utterances == 3);
}

TEST_CASE("empty corpora yield zero totals and absent averages") {
    const CorpusStats stats = corpus_stats({});
    CHECK(stats == CorpusStats{});
    CHECK(!stats.avg_words_per_sentence().has_value());
    CHECK(!stats.avg_utterance_length().has_value());

    const nlohmann::json j = stats.to_json();
    CHECK(!j.contains("avg_words_per_sentence"));
    CHECK(!j.contains("avg_utterance_length"));
    CHECK(j.at("total_words") == 0);

    const nlohmann::json full =
        corpus_stats({discourse_with_texts({"Is it safe? It is."})}).to_json();
    CHECK(full.at("avg_words_per_sentence") == 2.5);
    CHECK(full.at("avg_utterance_length") == 5.0);
}
