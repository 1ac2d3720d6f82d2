#include "traitlab/run_store.hpp"

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "traitlab/jsonl.hpp"

namespace traitlab {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json judges_json = nlohmann::json::object();
    for (const auto& [id, stats] : judges) {
        judges_json[id] = {
            {"invalid", stats.invalid}, {"total", stats.total}, {"rate", stats.rate}};
    }
    return {
        {"schema_version", kSchemaVersion},
        {"run_id", run_id},
        {"config_hash", config_hash},
        {"tool_version", tool_version},
        {"created_at", created_at},
        {"updated_at", updated_at},
        {"deterministic", deterministic},
        {"topic_count", topic_count},
        {"combo_count", combo_count},
        {"discourse_count", discourse_count},
        {"truncated_count", truncated_count},
        {"degenerate_count", degenerate_count},
        {"judges", judges_json},
    };
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest manifest;
    manifest.run_id = j.at("run_id").get<std::string>();
    manifest.config_hash = j.value("config_hash", std::string());
    manifest.tool_version = j.value("tool_version", std::string(kToolVersion));
    manifest.created_at = j.value("created_at", std::string());
    manifest.updated_at = j.value("updated_at", std::string());
    manifest.deterministic = j.value("deterministic", false);
    manifest.topic_count = j.value("topic_count", std::size_t{0});
    manifest.combo_count = j.value("combo_count", std::size_t{0});
    manifest.discourse_count = j.value("discourse_count", std::size_t{0});
    manifest.truncated_count = j.value("truncated_count", std::size_t{0});
    manifest.degenerate_count = j.value("degenerate_count", std::size_t{0});
    if (j.contains("judges")) {
        for (const auto& [id, stats] : j.at("judges").items()) {
            manifest.judges[id] = JudgeStats{stats.value("invalid", std::size_t{0}),
                                             stats.value("total", std::size_t{0}),
                                             stats.value("rate", 0.0)};
        }
    }
    return manifest;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

std::string now_utc_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02dZ", utc.tm_year + 1900,
                  utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec);
    return buffer;
}

void save_manifest(const RunPaths& paths, const RunManifest& manifest) {
    write_text_atomic(paths.manifest(), manifest.to_json().dump(2) + "\n");
}

RunManifest load_manifest(const RunPaths& paths) {
    if (!std::filesystem::exists(paths.manifest())) {
        throw MissingInputError("no manifest.json in " + paths.root.string() +
                                "; run generate first");
    }
    std::ifstream in(paths.manifest());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw std::runtime_error("manifest.json in " + paths.root.string() + " is not JSON");
    }
    return RunManifest::from_json(j);
}

void save_discourses(const RunPaths& paths, const std::vector<Discourse>& discourses) {
    std::vector<std::string> lines;
    lines.reserve(discourses.size());
    for (const auto& discourse : discourses) lines.push_back(discourse.to_json().dump());
    write_jsonl_atomic(paths.discourses(), lines);
}

std::vector<Discourse> load_discourses(const RunPaths& paths) {
    if (!std::filesystem::exists(paths.discourses())) {
        throw MissingInputError("no discourses.jsonl in " + paths.root.string() +
                                "; run generate first");
    }
    std::vector<Discourse> discourses;
    for (const auto& record : read_jsonl(paths.discourses())) {
        discourses.push_back(Discourse::from_json(record));
    }
    return discourses;
}

void save_verdicts(const RunPaths& paths, const std::vector<JudgeVerdict>& verdicts) {
    std::vector<std::string> lines;
    lines.reserve(verdicts.size());
    for (const auto& verdict : verdicts) lines.push_back(verdict.to_json().dump());
    write_jsonl_atomic(paths.verdicts(), lines);
}

std::vector<JudgeVerdict> load_verdicts(const RunPaths& paths) {
    if (!verdicts_exist(paths)) {
        throw MissingInputError("no verdicts.jsonl in " + paths.root.string() +
                                "; run judge first");
    }
    std::vector<JudgeVerdict> verdicts;
    for (const auto& record : read_jsonl(paths.verdicts())) {
        verdicts.push_back(JudgeVerdict::from_json(record));
    }
    return verdicts;
}

bool verdicts_exist(const RunPaths& paths) {
    return std::filesystem::exists(paths.verdicts());
}

}  // namespace traitlab
