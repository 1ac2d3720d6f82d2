#pragma once

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "traitlab/experiment.hpp"

namespace traitlab {

/// One chat-completion backend. `http` talks to an OpenAI-compatible
/// endpoint; `scripted` pops queued responses; `replay` serves a recorded
/// transcript keyed by (discourse id, turn).
enum class ProviderKind { Http, Scripted, Replay };

std::string provider_kind_to_string(ProviderKind kind);
std::optional<ProviderKind> provider_kind_from_string(const std::string& text);

struct ProviderConfig {
    std::string id;
    ProviderKind kind = ProviderKind::Scripted;
    std::string endpoint;      // http only, e.g. "http://host:port/v1"
    std::string model_name;    // http only
    std::string api_key_env;   // name of the env var holding the bearer token
    GenerationParams generation;
    int timeout_ms = 30000;
    int max_retries = 2;       // retries after the first attempt (3 attempts total)
    int initial_backoff_ms = 1000;
    int requests_per_minute = 0;  // 0 = unlimited
    std::string script_path;   // scripted only
    std::string replay_path;   // replay only

    /// Throws ConfigError when kind-specific requirements are unmet.
    void validate() const;

    nlohmann::json to_json() const;
    static ProviderConfig from_json(const nlohmann::json& j);
};

struct ProviderError {
    enum class Kind {
        Timeout,
        HttpStatus,
        ConnectionFailed,
        ExhaustedScript,
        MissingReplayEntry,
        MalformedResponseBody,
    };

    Kind kind = Kind::ConnectionFailed;
    int status = 0;  // HttpStatus only
    std::string message;

    /// Timeouts and 5xx statuses are worth another attempt; everything else
    /// (4xx, refused connections, exhausted scripts, bad bodies) is not.
    bool retryable() const;
    std::string describe() const;
};

std::string provider_error_kind_to_string(ProviderError::Kind kind);

/// Identifies the call for replay keying and error reporting.
struct CallContext {
    std::string discourse_id;
    int turn = 0;
};

struct ProviderReply {
    std::string text;
    std::optional<ProviderError> error;

    bool ok() const { return !error.has_value(); }
};

class Provider {
public:
    virtual ~Provider() = default;

    virtual ProviderReply complete(const std::string& system_prompt,
                                   const std::string& user_prompt,
                                   const GenerationParams& params,
                                   const CallContext& context) = 0;

    virtual const std::string& id() const = 0;

    /// True when identical inputs always produce identical outputs
    /// (scripted/replay); drives the run-wide determinism flag.
    virtual bool deterministic() const = 0;
};

/// Everything a provider saw on one call; scripted providers record these so
/// tests can inspect the exact prompts sent.
struct CallRecord {
    std::string system_prompt;
    std::string user_prompt;
    GenerationParams params;
    CallContext context;
};

/// Pops queued responses in order; safe to share across workers.
class ScriptedProvider : public Provider {
public:
    ScriptedProvider(std::string id, std::vector<std::string> responses);

    ProviderReply complete(const std::string& system_prompt, const std::string& user_prompt,
                           const GenerationParams& params, const CallContext& context) override;
    const std::string& id() const override { return id_; }
    bool deterministic() const override { return true; }

    std::vector<CallRecord> calls() const;
    std::size_t remaining() const;

private:
    std::string id_;
    mutable std::mutex mutex_;
    std::deque<std::string> responses_;
    std::vector<CallRecord> calls_;
};

/// Serves a recorded transcript; a call with no matching (discourse id, turn)
/// entry fails with MissingReplayEntry.
class ReplayProvider : public Provider {
public:
    ReplayProvider(std::string id, std::map<std::pair<std::string, int>, std::string> entries);

    ProviderReply complete(const std::string& system_prompt, const std::string& user_prompt,
                           const GenerationParams& params, const CallContext& context) override;
    const std::string& id() const override { return id_; }
    bool deterministic() const override { return true; }

private:
    std::string id_;
    std::map<std::pair<std::string, int>, std::string> entries_;
};

/// Refills continuously at `rate_per_second` up to `capacity`; acquire()
/// blocks (via the injected sleeper) until a token is available.
class TokenBucket {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    TokenBucket(double rate_per_second, double capacity, Clock clock = nullptr,
                Sleeper sleeper = nullptr);

    void acquire();

private:
    double rate_per_second_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
    Clock clock_;
    Sleeper sleeper_;
    std::mutex mutex_;
};

/// OpenAI-compatible chat-completions client. Sends system+user messages with
/// the given generation params, retries timeouts and 5xx with exponential
/// backoff, and reads the bearer token from the environment at call time; the
/// token never appears in errors or logs.
class HttpProvider : public Provider {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit HttpProvider(ProviderConfig config, Sleeper sleeper = nullptr);

    ProviderReply complete(const std::string& system_prompt, const std::string& user_prompt,
                           const GenerationParams& params, const CallContext& context) override;
    const std::string& id() const override { return config_.id; }
    bool deterministic() const override { return false; }

private:
    ProviderReply attempt_once(const std::string& system_prompt, const std::string& user_prompt,
                               const GenerationParams& params);

    ProviderConfig config_;
    Sleeper sleeper_;
    std::unique_ptr<TokenBucket> bucket_;
};

/// Reads a JSONL script: one {"text": ...} object per line.
std::vector<std::string> load_script_file(const std::filesystem::path& path);

/// Reads a JSONL transcript: one {"discourse_id": ..., "turn": ..., "text": ...}
/// object per line; duplicate keys are an error.
std::map<std::pair<std::string, int>, std::string> load_replay_file(
    const std::filesystem::path& path);

/// Builds the provider named by `config`, loading script/replay files as
/// needed. Throws ConfigError on invalid configs or unreadable files.
std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

}  // namespace traitlab
