#pragma once

#include <string>
#include <vector>

#include "traitlab/experiment.hpp"
#include "traitlab/providers.hpp"
#include "traitlab/sanitize.hpp"

namespace traitlab {

/// Parsed generate-phase configuration. Relative paths inside the file are
/// resolved against the file's own directory at load time.
struct RunConfig {
    std::string run_id;  // empty: derived from the output directory name
    int turns_per_participant = 4;
    std::string pairing_label;
    int workers = 1;
    bool send_history = false;  // embed all prior turns in the user prompt
    std::string topics_file;
    std::string combos_file;
    PairingPolicy pairing = PairingPolicy::Paired;
    GenerationParams generation;
    std::vector<ProviderConfig> providers;  // file order
    std::string participant_p1;             // provider ids
    std::string participant_p2;
    SanitizeRules sanitize;
    std::string prompts_dir;  // empty: built-in templates
    double similarity_threshold = 0.9;

    /// The provider config for one participant slot; throws ConfigError when
    /// the id is unknown.
    const ProviderConfig& provider_for(const std::string& provider_id) const;
};

/// Loads and validates a [run]/[topics]/[traits]/[providers.<id>]/... file.
/// When no [participants] table names the slots: one provider serves both,
/// two providers map to P1/P2 in file order, more than two is an error.
RunConfig load_run_config(const std::string& path);

struct JudgeSpec {
    ProviderConfig provider;  // generation.temperature defaults to 0 here
    int invalid_retries = 1;
    bool joint = false;  // one call rating both participants
};

/// Loads a judges file of [judges.<id>] tables, preserving file order.
std::vector<JudgeSpec> load_judges_config(const std::string& path);

}  // namespace traitlab
