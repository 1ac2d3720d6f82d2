#include "traitlab/config.hpp"

#include <filesystem>
#include <set>

#include "traitlab/tomlmini.hpp"

namespace traitlab {

namespace {

namespace fs = std::filesystem;

std::string resolve_path(const std::string& path, const fs::path& base_dir) {
    if (path.empty()) return path;
    const fs::path p(path);
    if (p.is_absolute()) return p.lexically_normal().string();
    return (base_dir / p).lexically_normal().string();
}

void check_keys(const nlohmann::ordered_json& table, const std::set<std::string>& allowed,
                const std::string& context) {
    for (const auto& [key, value] : table.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + context);
        }
    }
}

template <typename T>
T read_value(const nlohmann::ordered_json& table, const std::string& key, T fallback,
             const std::string& context) {
    if (!table.contains(key)) return fallback;
    try {
        return table.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("key '" + key + "' in " + context + " has the wrong type");
    }
}

GenerationParams read_generation(const nlohmann::ordered_json& table,
                                 GenerationParams defaults, const std::string& context) {
    GenerationParams params = defaults;
    params.temperature = read_value(table, "temperature", params.temperature, context);
    params.max_tokens = read_value(table, "max_tokens", params.max_tokens, context);
    if (table.contains("seed")) {
        params.seed = read_value<long long>(table, "seed", 0, context);
    }
    return params;
}

ProviderConfig provider_from_table(const std::string& id, const nlohmann::ordered_json& table,
                                   const fs::path& base_dir, double default_temperature) {
    const std::string context = "provider '" + id + "'";
    check_keys(table,
               {"kind", "endpoint", "model_name", "api_key_env", "timeout_ms", "max_retries",
                "initial_backoff_ms", "requests_per_minute", "script", "replay", "temperature",
                "max_tokens", "seed", "invalid_retries", "joint"},
               context);

    ProviderConfig config;
    config.id = id;
    const std::string kind_text = read_value<std::string>(table, "kind", "", context);
    const auto kind = provider_kind_from_string(kind_text);
    if (!kind) throw ConfigError(context + ": unknown kind '" + kind_text + "'");
    config.kind = *kind;
    config.endpoint = read_value<std::string>(table, "endpoint", "", context);
    config.model_name = read_value<std::string>(table, "model_name", "", context);
    config.api_key_env = read_value<std::string>(table, "api_key_env", "", context);
    config.timeout_ms = read_value(table, "timeout_ms", config.timeout_ms, context);
    config.max_retries = read_value(table, "max_retries", config.max_retries, context);
    config.initial_backoff_ms =
        read_value(table, "initial_backoff_ms", config.initial_backoff_ms, context);
    config.requests_per_minute =
        read_value(table, "requests_per_minute", config.requests_per_minute, context);
    config.script_path =
        resolve_path(read_value<std::string>(table, "script", "", context), base_dir);
    config.replay_path =
        resolve_path(read_value<std::string>(table, "replay", "", context), base_dir);
    GenerationParams defaults;
    defaults.temperature = default_temperature;
    config.generation = read_generation(table, defaults, context);
    config.validate();
    return config;
}

}  // namespace

const ProviderConfig& RunConfig::provider_for(const std::string& provider_id) const {
    for (const auto& provider : providers) {
        if (provider.id == provider_id) return provider;
    }
    throw ConfigError("no provider named '" + provider_id + "'");
}

RunConfig load_run_config(const std::string& path) {
    const nlohmann::ordered_json root = parse_toml_file(path);
    const fs::path base_dir = fs::path(path).parent_path();
    check_keys(root,
               {"run", "topics", "traits", "generation", "providers", "participants", "sanitize",
                "prompts", "metrics"},
               "config");

    RunConfig config;
    if (root.contains("run")) {
        const auto& run = root.at("run");
        check_keys(run, {"id", "turns_per_participant", "pairing_label", "workers", "history"},
                   "[run]");
        config.run_id = read_value<std::string>(run, "id", "", "[run]");
        config.turns_per_participant =
            read_value(run, "turns_per_participant", config.turns_per_participant, "[run]");
        config.pairing_label = read_value<std::string>(run, "pairing_label", "", "[run]");
        config.workers = read_value(run, "workers", config.workers, "[run]");
        config.send_history = read_value(run, "history", config.send_history, "[run]");
    }
    if (config.turns_per_participant < 1) {
        throw ConfigError("[run] turns_per_participant must be at least 1");
    }
    if (config.workers < 1) throw ConfigError("[run] workers must be at least 1");

    if (!root.contains("topics")) throw ConfigError("config needs a [topics] table");
    check_keys(root.at("topics"), {"file"}, "[topics]");
    config.topics_file =
        resolve_path(read_value<std::string>(root.at("topics"), "file", "", "[topics]"), base_dir);
    if (config.topics_file.empty()) throw ConfigError("[topics] needs file = \"...\"");

    if (!root.contains("traits")) throw ConfigError("config needs a [traits] table");
    check_keys(root.at("traits"), {"file", "pairing"}, "[traits]");
    config.combos_file =
        resolve_path(read_value<std::string>(root.at("traits"), "file", "", "[traits]"), base_dir);
    if (config.combos_file.empty()) throw ConfigError("[traits] needs file = \"...\"");
    const std::string pairing =
        read_value<std::string>(root.at("traits"), "pairing", "paired", "[traits]");
    if (pairing == "paired") {
        config.pairing = PairingPolicy::Paired;
    } else if (pairing == "mirror") {
        config.pairing = PairingPolicy::Mirror;
    } else {
        throw ConfigError("[traits] pairing must be \"paired\" or \"mirror\"");
    }

    if (root.contains("generation")) {
        check_keys(root.at("generation"), {"temperature", "max_tokens", "seed"}, "[generation]");
        config.generation = read_generation(root.at("generation"), config.generation,
                                            "[generation]");
    }

    if (!root.contains("providers") || !root.at("providers").is_object() ||
        root.at("providers").empty()) {
        throw ConfigError("config needs at least one [providers.<id>] table");
    }
    for (const auto& [id, table] : root.at("providers").items()) {
        config.providers.push_back(
            provider_from_table(id, table, base_dir, config.generation.temperature));
    }

    if (root.contains("participants")) {
        const auto& participants = root.at("participants");
        check_keys(participants, {"p1", "p2"}, "[participants]");
        config.participant_p1 = read_value<std::string>(participants, "p1", "", "[participants]");
        config.participant_p2 = read_value<std::string>(participants, "p2", "", "[participants]");
        if (config.participant_p1.empty() || config.participant_p2.empty()) {
            throw ConfigError("[participants] needs both p1 and p2");
        }
    } else if (config.providers.size() == 1) {
        config.participant_p1 = config.providers[0].id;
        config.participant_p2 = config.providers[0].id;
    } else if (config.providers.size() == 2) {
        config.participant_p1 = config.providers[0].id;
        config.participant_p2 = config.providers[1].id;
    } else {
        throw ConfigError("with more than two providers, [participants] must name p1 and p2");
    }
    config.provider_for(config.participant_p1);
    config.provider_for(config.participant_p2);

    if (config.pairing_label.empty()) {
        config.pairing_label = config.participant_p1 + "_vs_" + config.participant_p2;
    }

    if (root.contains("sanitize")) {
        const auto& sanitize = root.at("sanitize");
        check_keys(sanitize,
                   {"strip_inline_tags", "strip_prompt_echo", "trim_whitespace", "role_prefixes"},
                   "[sanitize]");
        config.sanitize.strip_inline_tags = read_value(
            sanitize, "strip_inline_tags", config.sanitize.strip_inline_tags, "[sanitize]");
        config.sanitize.strip_prompt_echo = read_value(
            sanitize, "strip_prompt_echo", config.sanitize.strip_prompt_echo, "[sanitize]");
        config.sanitize.trim_whitespace = read_value(
            sanitize, "trim_whitespace", config.sanitize.trim_whitespace, "[sanitize]");
        if (sanitize.contains("role_prefixes")) {
            config.sanitize.drop_role_prefixes = read_value<std::vector<std::string>>(
                sanitize, "role_prefixes", {}, "[sanitize]");
        }
    }

    if (root.contains("prompts")) {
        check_keys(root.at("prompts"), {"dir"}, "[prompts]");
        config.prompts_dir =
            resolve_path(read_value<std::string>(root.at("prompts"), "dir", "", "[prompts]"),
                         base_dir);
    }

    if (root.contains("metrics")) {
        check_keys(root.at("metrics"), {"similarity_threshold"}, "[metrics]");
        config.similarity_threshold = read_value(
            root.at("metrics"), "similarity_threshold", config.similarity_threshold, "[metrics]");
        if (config.similarity_threshold < 0.0 || config.similarity_threshold > 1.0) {
            throw ConfigError("[metrics] similarity_threshold must be in [0, 1]");
        }
    }

    return config;
}

std::vector<JudgeSpec> load_judges_config(const std::string& path) {
    const nlohmann::ordered_json root = parse_toml_file(path);
    const fs::path base_dir = fs::path(path).parent_path();
    check_keys(root, {"judges"}, "judges config");
    if (!root.contains("judges") || !root.at("judges").is_object() || root.at("judges").empty()) {
        throw ConfigError("judges config needs at least one [judges.<id>] table");
    }

    std::vector<JudgeSpec> judges;
    for (const auto& [id, table] : root.at("judges").items()) {
        JudgeSpec spec;
        // Judges default to temperature 0: deterministic ratings.
        spec.provider = provider_from_table(id, table, base_dir, 0.0);
        spec.invalid_retries =
            read_value(table, "invalid_retries", spec.invalid_retries, "judge '" + id + "'");
        if (spec.invalid_retries < 0) {
            throw ConfigError("judge '" + id + "': invalid_retries must be non-negative");
        }
        spec.joint = read_value(table, "joint", spec.joint, "judge '" + id + "'");
        judges.push_back(std::move(spec));
    }
    return judges;
}

}  // namespace traitlab
