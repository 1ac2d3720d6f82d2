#include "traitlab/providers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>

namespace traitlab {

namespace {

nlohmann::json generation_to_json(const GenerationParams& params) {
    nlohmann::json j = {{"temperature", params.temperature}, {"max_tokens", params.max_tokens}};
    if (params.seed) j["seed"] = *params.seed;
    return j;
}

GenerationParams generation_from_json(const nlohmann::json& j) {
    GenerationParams params;
    params.temperature = j.value("temperature", params.temperature);
    params.max_tokens = j.value("max_tokens", params.max_tokens);
    if (j.contains("seed")) params.seed = j.at("seed").get<long long>();
    return params;
}

void default_sleep(std::chrono::milliseconds duration) { std::this_thread::sleep_for(duration); }

/// Splits "http://host:port/prefix" into the client base and the path prefix
/// (no trailing slash).
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const std::size_t scheme_end = endpoint.find("://");
    const std::size_t path_start =
        endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {endpoint.substr(0, path_start), prefix};
}

}  // namespace

std::string provider_kind_to_string(ProviderKind kind) {
    switch (kind) {
        case ProviderKind::Http: return "http";
        case ProviderKind::Scripted: return "scripted";
        case ProviderKind::Replay: return "replay";
    }
    return "scripted";
}

std::optional<ProviderKind> provider_kind_from_string(const std::string& text) {
    if (text == "http") return ProviderKind::Http;
    if (text == "scripted") return ProviderKind::Scripted;
    if (text == "replay") return ProviderKind::Replay;
    return std::nullopt;
}

void ProviderConfig::validate() const {
    if (id.empty()) throw ConfigError("provider id must not be empty");
    if (kind == ProviderKind::Http) {
        if (endpoint.empty()) throw ConfigError("http provider '" + id + "' needs an endpoint");
        if (model_name.empty()) throw ConfigError("http provider '" + id + "' needs a model_name");
    }
    if (kind == ProviderKind::Scripted && script_path.empty()) {
        throw ConfigError("scripted provider '" + id + "' needs a script file");
    }
    if (kind == ProviderKind::Replay && replay_path.empty()) {
        throw ConfigError("replay provider '" + id + "' needs a replay file");
    }
    if (timeout_ms <= 0) throw ConfigError("provider '" + id + "': timeout_ms must be positive");
    if (max_retries < 0 || initial_backoff_ms < 0 || requests_per_minute < 0) {
        throw ConfigError("provider '" + id + "': retry and rate settings must be non-negative");
    }
}

nlohmann::json ProviderConfig::to_json() const {
    return {
        {"id", id},
        {"kind", provider_kind_to_string(kind)},
        {"endpoint", endpoint},
        {"model_name", model_name},
        {"api_key_env", api_key_env},
        {"generation", generation_to_json(generation)},
        {"timeout_ms", timeout_ms},
        {"max_retries", max_retries},
        {"initial_backoff_ms", initial_backoff_ms},
        {"requests_per_minute", requests_per_minute},
        {"script", script_path},
        {"replay", replay_path},
    };
}

ProviderConfig ProviderConfig::from_json(const nlohmann::json& j) {
    ProviderConfig config;
    config.id = j.at("id").get<std::string>();
    const std::string kind_text = j.value("kind", std::string("scripted"));
    const auto kind = provider_kind_from_string(kind_text);
    if (!kind) throw ConfigError("unknown provider kind '" + kind_text + "'");
    config.kind = *kind;
    config.endpoint = j.value("endpoint", std::string());
    config.model_name = j.value("model_name", std::string());
    config.api_key_env = j.value("api_key_env", std::string());
    if (j.contains("generation")) config.generation = generation_from_json(j.at("generation"));
    config.timeout_ms = j.value("timeout_ms", config.timeout_ms);
    config.max_retries = j.value("max_retries", config.max_retries);
    config.initial_backoff_ms = j.value("initial_backoff_ms", config.initial_backoff_ms);
    config.requests_per_minute = j.value("requests_per_minute", config.requests_per_minute);
    config.script_path = j.value("script", std::string());
    config.replay_path = j.value("replay", std::string());
    return config;
}

bool ProviderError::retryable() const {
    if (kind == Kind::Timeout) return true;
    return kind == Kind::HttpStatus && status >= 500;
}

std::string provider_error_kind_to_string(ProviderError::Kind kind) {
    switch (kind) {
        case ProviderError::Kind::Timeout: return "timeout";
        case ProviderError::Kind::HttpStatus: return "http_status";
        case ProviderError::Kind::ConnectionFailed: return "connection_failed";
        case ProviderError::Kind::ExhaustedScript: return "exhausted_script";
        case ProviderError::Kind::MissingReplayEntry: return "missing_replay_entry";
        case ProviderError::Kind::MalformedResponseBody: return "malformed_response_body";
    }
    return "connection_failed";
}

std::string ProviderError::describe() const {
    std::string text = provider_error_kind_to_string(kind);
    if (kind == Kind::HttpStatus) text += " " + std::to_string(status);
    if (!message.empty()) text += ": " + message;
    return text;
}

ScriptedProvider::ScriptedProvider(std::string id, std::vector<std::string> responses)
    : id_(std::move(id)), responses_(responses.begin(), responses.end()) {}

ProviderReply ScriptedProvider::complete(const std::string& system_prompt,
                                         const std::string& user_prompt,
                                         const GenerationParams& params,
                                         const CallContext& context) {
    std::lock_guard<std::mutex> lock(mutex_);
    calls_.push_back({system_prompt, user_prompt, params, context});
    ProviderReply reply;
    if (responses_.empty()) {
        reply.error = ProviderError{ProviderError::Kind::ExhaustedScript, 0,
                                    "script exhausted at " + context.discourse_id + " turn " +
                                        std::to_string(context.turn)};
        return reply;
    }
    reply.text = std::move(responses_.front());
    responses_.pop_front();
    return reply;
}

std::vector<CallRecord> ScriptedProvider::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

std::size_t ScriptedProvider::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return responses_.size();
}

ReplayProvider::ReplayProvider(std::string id,
                               std::map<std::pair<std::string, int>, std::string> entries)
    : id_(std::move(id)), entries_(std::move(entries)) {}

ProviderReply ReplayProvider::complete(const std::string&, const std::string&,
                                       const GenerationParams&, const CallContext& context) {
    ProviderReply reply;
    const auto it = entries_.find({context.discourse_id, context.turn});
    if (it == entries_.end()) {
        reply.error = ProviderError{ProviderError::Kind::MissingReplayEntry, 0,
                                    "no replay entry for " + context.discourse_id + " turn " +
                                        std::to_string(context.turn)};
        return reply;
    }
    reply.text = it->second;
    return reply;
}

TokenBucket::TokenBucket(double rate_per_second, double capacity, Clock clock, Sleeper sleeper)
    : rate_per_second_(rate_per_second),
      capacity_(std::max(capacity, 1.0)),
      tokens_(std::max(capacity, 1.0)),
      clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }),
      sleeper_(sleeper ? std::move(sleeper) : default_sleep) {
    last_refill_ = clock_();
}

void TokenBucket::acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    for (;;) {
        const auto now = clock_();
        const double elapsed = std::chrono::duration<double>(now - last_refill_).count();
        if (elapsed > 0) {
            tokens_ = std::min(capacity_, tokens_ + elapsed * rate_per_second_);
            last_refill_ = now;
        }
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        const double needed_seconds = (1.0 - tokens_) / rate_per_second_;
        const auto wait =
            std::chrono::milliseconds(static_cast<long long>(std::ceil(needed_seconds * 1000.0)));
        lock.unlock();
        sleeper_(std::max(wait, std::chrono::milliseconds(1)));
        lock.lock();
    }
}

HttpProvider::HttpProvider(ProviderConfig config, Sleeper sleeper)
    : config_(std::move(config)), sleeper_(sleeper ? std::move(sleeper) : default_sleep) {
    if (config_.requests_per_minute > 0) {
        bucket_ = std::make_unique<TokenBucket>(config_.requests_per_minute / 60.0,
                                                static_cast<double>(config_.requests_per_minute),
                                                nullptr, sleeper_);
    }
}

ProviderReply HttpProvider::attempt_once(const std::string& system_prompt,
                                         const std::string& user_prompt,
                                         const GenerationParams& params) {
    const auto [base, prefix] = split_endpoint(config_.endpoint);
    httplib::Client client(base);
    const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    nlohmann::json body = {
        {"model", config_.model_name},
        {"messages",
         {{{"role", "system"}, {"content", system_prompt}},
          {{"role", "user"}, {"content", user_prompt}}}},
        {"temperature", params.temperature},
        {"max_tokens", params.max_tokens},
    };
    if (params.seed) body["seed"] = *params.seed;

    ProviderReply reply;
    auto res = client.Post(prefix + "/chat/completions", headers, body.dump(),
                           "application/json");
    if (!res) {
        const auto err = res.error();
        const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                               err == httplib::Error::Read || err == httplib::Error::Write;
        reply.error = ProviderError{timed_out ? ProviderError::Kind::Timeout
                                              : ProviderError::Kind::ConnectionFailed,
                                    0, httplib::to_string(err)};
        return reply;
    }
    if (res->status < 200 || res->status >= 300) {
        reply.error = ProviderError{ProviderError::Kind::HttpStatus, res->status,
                                    "chat-completions request failed"};
        return reply;
    }

    nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
        reply.error = ProviderError{ProviderError::Kind::MalformedResponseBody, 0,
                                    "response body is not JSON"};
        return reply;
    }
    const auto* content = [&]() -> const nlohmann::json* {
        if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
            parsed["choices"].empty()) {
            return nullptr;
        }
        const auto& first = parsed["choices"][0];
        if (!first.contains("message") || !first["message"].contains("content") ||
            !first["message"]["content"].is_string()) {
            return nullptr;
        }
        return &first["message"]["content"];
    }();
    if (!content) {
        reply.error = ProviderError{ProviderError::Kind::MalformedResponseBody, 0,
                                    "missing choices[0].message.content"};
        return reply;
    }
    reply.text = content->get<std::string>();
    return reply;
}

ProviderReply HttpProvider::complete(const std::string& system_prompt,
                                     const std::string& user_prompt,
                                     const GenerationParams& params, const CallContext&) {
    ProviderReply reply;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (bucket_) bucket_->acquire();
        reply = attempt_once(system_prompt, user_prompt, params);
        if (reply.ok() || !reply.error->retryable() || attempt == config_.max_retries) {
            return reply;
        }
        const long long backoff = static_cast<long long>(config_.initial_backoff_ms) << attempt;
        sleeper_(std::chrono::milliseconds(backoff));
    }
    return reply;
}

std::vector<std::string> load_script_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open script file: " + path.string());
    std::vector<std::string> responses;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("text") ||
            !j["text"].is_string()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected {\"text\": ...}");
        }
        responses.push_back(j["text"].get<std::string>());
    }
    return responses;
}

std::map<std::pair<std::string, int>, std::string> load_replay_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open replay file: " + path.string());
    std::map<std::pair<std::string, int>, std::string> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (j.is_discarded() || !j.is_object() || !j.contains("discourse_id") ||
            !j.contains("turn") || !j.contains("text") || !j["text"].is_string()) {
            throw ConfigError(where + ": expected {\"discourse_id\", \"turn\", \"text\"}");
        }
        const std::pair<std::string, int> key{j["discourse_id"].get<std::string>(),
                                              j["turn"].get<int>()};
        if (!entries.emplace(key, j["text"].get<std::string>()).second) {
            throw ConfigError(where + ": duplicate replay entry for " + key.first + " turn " +
                              std::to_string(key.second));
        }
    }
    return entries;
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config) {
    config.validate();
    switch (config.kind) {
        case ProviderKind::Scripted:
            return std::make_unique<ScriptedProvider>(config.id,
                                                      load_script_file(config.script_path));
        case ProviderKind::Replay:
            return std::make_unique<ReplayProvider>(config.id,
                                                    load_replay_file(config.replay_path));
        case ProviderKind::Http: return std::make_unique<HttpProvider>(config);
    }
    throw ConfigError("unknown provider kind");
}

}  // namespace traitlab
