#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "traitlab/discourse.hpp"
#include "traitlab/judging.hpp"

namespace traitlab {

inline constexpr const char* kToolVersion = "1.0.0";

/// A required phase output is not there yet; the CLI maps this to exit 3.
class MissingInputError : public std::runtime_error {
public:
    explicit MissingInputError(const std::string& what) : std::runtime_error(what) {}
};

/// File layout inside one run directory.
struct RunPaths {
    std::filesystem::path root;

    std::filesystem::path manifest() const { return root / "manifest.json"; }
    std::filesystem::path discourses() const { return root / "discourses.jsonl"; }
    std::filesystem::path verdicts() const { return root / "verdicts.jsonl"; }
    std::filesystem::path reports_dir() const { return root / "reports"; }
    std::filesystem::path review_sample() const { return root / "review_sample.txt"; }
};

struct JudgeStats {
    std::size_t invalid = 0;
    std::size_t total = 0;
    double rate = 0.0;

    bool operator==(const JudgeStats&) const = default;
};

struct RunManifest {
    std::string run_id;
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::string created_at;
    std::string updated_at;
    bool deterministic = false;
    std::size_t topic_count = 0;
    std::size_t combo_count = 0;
    std::size_t discourse_count = 0;
    std::size_t truncated_count = 0;
    std::size_t degenerate_count = 0;
    std::map<std::string, JudgeStats> judges;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

/// FNV-1a 64-bit over raw bytes, hex-encoded; stable fingerprint for configs.
std::string fnv1a_hex(const std::string& bytes);

/// Wall-clock UTC "YYYY-MM-DDTHH:MM:SSZ".
std::string now_utc_iso8601();

/// Timestamp used inside records of fully deterministic runs so reruns are
/// byte-identical.
inline constexpr const char* kEpochTimestamp = "1970-01-01T00:00:00Z";

void save_manifest(const RunPaths& paths, const RunManifest& manifest);
/// Throws MissingInputError when the run directory has no manifest yet.
RunManifest load_manifest(const RunPaths& paths);

void save_discourses(const RunPaths& paths, const std::vector<Discourse>& discourses);
std::vector<Discourse> load_discourses(const RunPaths& paths);

void save_verdicts(const RunPaths& paths, const std::vector<JudgeVerdict>& verdicts);
std::vector<JudgeVerdict> load_verdicts(const RunPaths& paths);
bool verdicts_exist(const RunPaths& paths);

}  // namespace traitlab
