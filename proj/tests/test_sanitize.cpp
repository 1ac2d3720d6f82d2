#include <doctest.h>

#include <random>

#include "traitlab/sanitize.hpp"

using namespace traitlab;

namespace {

const SanitizeRules kDefaultRules;
const SanitizeContext kNoContext;

std::string sanitize(const std::string& raw, const SanitizeContext& context = kNoContext) {
    return sanitize_utterance(raw, kDefaultRules, context).clean;
}

}  // namespace

TEST_CASE("clean text is a fixed point") {
    const std::string text = "Nuclear power is reliable. It runs day and night.";
    const SanitizeResult result = sanitize_utterance(text, kDefaultRules, kNoContext);
    CHECK(result.clean == text);
    CHECK(result.removed.empty());
    CHECK(!result.empty_after_sanitize);
}

TEST_CASE("well-formed tag spans are removed with their content") {
    CHECK(sanitize("<think>plan the rebuttal</think>Nuclear power is reliable.") ==
          "Nuclear power is reliable.");
    CHECK(sanitize("Sound point.<reasoning>hidden\nnotes</reasoning> I agree.") ==
          "Sound point. I agree.");
}

TEST_CASE("lone tag markers are removed without eating text") {
    CHECK(sanitize("<think>The grid needs firm power.") == "The grid needs firm power.");
    CHECK(sanitize("The grid needs firm power.</think>") == "The grid needs firm power.");
    CHECK(sanitize("<final/>It all adds up.") == "It all adds up.");
}

TEST_CASE("comparison operators survive tag stripping") {
    CHECK(sanitize("a < b") == "a < b");
    CHECK(sanitize("3 < 5 and 5 > 3") == "3 < 5 and 5 > 3");
    CHECK(sanitize("costs < 10% while output > plan") == "costs < 10% while output > plan");
}

TEST_CASE("leading lines echoing the prompt are dropped") {
    SanitizeContext context;
    context.system_prompt = "You are a debater.\nKeep it short.";
    context.user_prompt = "Previous Argument:\"\"";
    const std::string raw = "Keep it short.\nPrevious Argument:\"\"\nWind power wins on cost.";
    CHECK(sanitize(raw, context) == "Wind power wins on cost.");
}

TEST_CASE("echo stripping stops at the first non-echo line") {
    SanitizeContext context;
    context.system_prompt = "Keep it short.";
    const std::string raw = "Wind power wins on cost.\nKeep it short.";
    CHECK(sanitize(raw, context) == raw);
}

TEST_CASE("role prefixes are dropped") {
    CHECK(sanitize("Assistant: Hello there.") == "Hello there.");
    CHECK(sanitize("AI:   Solar is cheap now.") == "Solar is cheap now.");
    CHECK(sanitize("assistant: lowercase variant.") == "lowercase variant.");
}

TEST_CASE("whitespace is trimmed") {
    CHECK(sanitize("  padded  ") == "padded");
    CHECK(sanitize("\n\nnew lines\n") == "new lines");
}

TEST_CASE("a fully stripped utterance is flagged") {
    const SanitizeResult result =
        sanitize_utterance("<think>only internal notes</think>", kDefaultRules, kNoContext);
    CHECK(result.clean.empty());
    CHECK(result.empty_after_sanitize);
    REQUIRE(!result.removed.empty());
    CHECK(result.removed.front().first == "inline_tag");
}

TEST_CASE("rules can be disabled individually") {
    SanitizeRules rules;
    rules.strip_inline_tags = false;
    const std::string tagged = "<think>x</think>kept";
    CHECK(sanitize_utterance(tagged, rules, kNoContext).clean == tagged);
}

TEST_CASE("removal records name the rule that fired") {
    const SanitizeResult result =
        sanitize_utterance("Assistant: <note>n</note>Fine.", kDefaultRules, kNoContext);
    CHECK(result.clean == "Fine.");
    bool saw_tag = false;
    bool saw_prefix = false;
    for (const auto& [rule, removed] : result.removed) {
        if (rule == "inline_tag") saw_tag = true;
        if (rule == "role_prefix") saw_prefix = true;
    }
    CHECK(saw_tag);
    CHECK(saw_prefix);
}

TEST_CASE("sanitizing twice equals sanitizing once over random noisy inputs") {
    // The charset is biased toward the characters the rules care about.
    const std::string alphabet =
        "<>/ab cdef\nAssistant:think\"'.?!THINK<final>previous argument";
    std::mt19937 rng(20240816);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> length(0, 120);

    SanitizeContext context;
    context.system_prompt = "Keep responses under 50 words";
    context.user_prompt = "Previous Argument:\"\"";

    for (int i = 0; i < 10000; ++i) {
        std::string raw;
        const int n = length(rng);
        raw.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) raw.push_back(alphabet[pick(rng)]);

        const SanitizeResult once = sanitize_utterance(raw, kDefaultRules, context);
        const SanitizeResult twice = sanitize_utterance(once.clean, kDefaultRules, context);
        if (once.clean != twice.clean) {
            CAPTURE(raw);
            CAPTURE(once.clean);
            CAPTURE(twice.clean);
            REQUIRE(once.clean == twice.clean);
        }
        CHECK(once.empty_after_sanitize == once.clean.empty());
    }
}
