#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "traitlab/discourse.hpp"
#include "traitlab/prompts.hpp"
#include "traitlab/providers.hpp"
#include "traitlab/traits.hpp"

namespace traitlab {

/// Machine-readable reason a judge response was rejected.
struct InvalidReason {
    enum class Kind {
        NoJsonFound,
        UnbalancedJson,
        MissingKey,
        InvalidLevel,
        EchoedTemplate,
        Transport,
        EmptyText,
    };

    Kind kind = Kind::NoJsonFound;
    std::string detail;  // offending key path, trait/value, or transport error

    bool operator==(const InvalidReason&) const = default;
};

std::string invalid_reason_kind_to_string(InvalidReason::Kind kind);
std::optional<InvalidReason::Kind> invalid_reason_kind_from_string(const std::string& text);

/// Outcome of extracting a structured verdict from raw judge output.
/// `valid` implies `predicted` is complete; otherwise `reason` says why not.
struct VerdictParse {
    bool valid = false;
    TraitProfile predicted;
    std::optional<std::map<TraitName, bool>> consistency;
    InvalidReason reason;
};

/// Finds the first balanced JSON object in `raw` that parses and carries a
/// "predicted_bfi" key (code fences, surrounding prose, and inline tags are
/// all tolerated), then validates the five trait levels case-insensitively.
/// A literal "High/Low" value is the template echoed back, not a rating.
/// Never throws: every input maps to a valid parse or a specific reason.
VerdictParse parse_verdict(const std::string& raw);

struct JudgeVerdict {
    std::string judge_id;
    std::string discourse_id;
    Speaker participant = Speaker::P1;
    bool valid = false;
    TraitProfile predicted;  // meaningful only when valid
    std::optional<std::map<TraitName, bool>> consistency;
    std::optional<InvalidReason> invalid_reason;
    std::string raw_response;  // retained for audit

    nlohmann::json to_json() const;
    static JudgeVerdict from_json(const nlohmann::json& j);

    bool operator==(const JudgeVerdict&) const = default;
};

struct JudgeOptions {
    /// Extra judge calls after a response fails to parse (transport errors
    /// and empty participant text are recorded immediately, not retried).
    int invalid_retries = 1;
};

/// Judges one participant: renders the anonymized prompts, calls the judge
/// (plus configured retries on invalid output), and returns the verdict.
/// Provider errors become Invalid(Transport); empty participant text becomes
/// Invalid(EmptyText). Never throws on judge behavior.
JudgeVerdict judge_participant(Provider& judge, const GenerationParams& params,
                               const Discourse& discourse, const PromptTemplates& templates,
                               Speaker participant, const JudgeOptions& options = {});

/// Both participants of one discourse: the P1 verdict then the P2 verdict.
std::vector<JudgeVerdict> judge_discourse(Provider& judge, const GenerationParams& params,
                                          const Discourse& discourse,
                                          const PromptTemplates& templates,
                                          const JudgeOptions& options = {});

/// Splits a joint response into (P1, P2) parses: the first predicted_bfi
/// object found is P1's, the second is P2's. Zero objects fail both sides
/// with the usual extraction reason; exactly one fails P2 with MissingKey.
std::pair<VerdictParse, VerdictParse> parse_joint_verdicts(const std::string& raw);

/// One judge call covering both participants: the user prompt stacks both
/// labeled text blocks, the response must carry two predicted_bfi objects in
/// participant order. A side with no usable text is judged EmptyText up
/// front and the other side falls back to a single-participant call.
std::vector<JudgeVerdict> judge_discourse_joint(Provider& judge, const GenerationParams& params,
                                                const Discourse& discourse,
                                                const PromptTemplates& templates,
                                                const JudgeOptions& options = {});

struct InvalidRate {
    std::size_t invalid = 0;
    std::size_t total = 0;

    double rate() const { return total == 0 ? 0.0 : static_cast<double>(invalid) / total; }
};

std::map<std::string, InvalidRate> invalid_rate_by_judge(const std::vector<JudgeVerdict>& verdicts);

}  // namespace traitlab
