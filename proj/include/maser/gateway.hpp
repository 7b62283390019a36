#pragma once

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace maser {

// ---------------------------------------------------------------------------
// Chat completion contract
// ---------------------------------------------------------------------------

enum class MessageRole { System, User, Assistant };

const char* message_role_name(MessageRole role);
MessageRole message_role_from_string(const std::string& name);

struct ChatMessage {
    MessageRole role = MessageRole::User;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    std::string model_id;
    std::vector<ChatMessage> messages;
    double temperature = 0.7;
    int max_tokens = 2048;
    std::optional<std::int64_t> seed;

    bool operator==(const ChatRequest&) const = default;
};

// Throws Error{PreconditionViolation} on an empty message list or an
// assistant-first conversation.
void check_chat_request(const ChatRequest& request);

enum class FinishReason { Stop, Length, Error };

struct TokenUsage {
    int prompt_tokens = 0;
    int completion_tokens = 0;

    bool operator==(const TokenUsage&) const = default;
};

struct ChatResponse {
    std::string content;
    FinishReason finish_reason = FinishReason::Stop;
    TokenUsage usage;

    bool operator==(const ChatResponse&) const = default;
};

// Stable content hash over (model_id, messages, temperature, seed).
// Identical requests yield identical keys across runs and machines.
std::string request_key(const ChatRequest& request);

void to_json(nlohmann::json& j, const ChatMessage& v);
void from_json(const nlohmann::json& j, ChatMessage& v);
void to_json(nlohmann::json& j, const ChatRequest& v);
void from_json(const nlohmann::json& j, ChatRequest& v);
void to_json(nlohmann::json& j, const ChatResponse& v);
void from_json(const nlohmann::json& j, ChatResponse& v);

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

class ChatBackend {
public:
    virtual ~ChatBackend() = default;

    // Validates the request, then resolves it through complete_impl.
    ChatResponse complete(const ChatRequest& request);

    // Number of requests this backend has served (or attempted).
    size_t calls() const { return calls_.load(); }

protected:
    virtual ChatResponse complete_impl(const ChatRequest& request) = 0;

private:
    std::atomic<size_t> calls_{0};
};

// ---------------------------------------------------------------------------
// Scripted backend: deterministic canned responses for tests and fixtures
// ---------------------------------------------------------------------------

struct ExactMatcher {
    std::string key;  // request_key hash
    bool operator==(const ExactMatcher&) const = default;
};

struct SequenceMatcher {
    int index = 0;  // consumed in ascending order
    bool operator==(const SequenceMatcher&) const = default;
};

struct RolePatternMatcher {
    MessageRole role = MessageRole::User;  // role of the request's last message
    int turn = 0;                          // 0-based count of prior same-role requests
    bool operator==(const RolePatternMatcher&) const = default;
};

struct ScriptEntry {
    std::variant<ExactMatcher, SequenceMatcher, RolePatternMatcher> matcher;
    std::string response;

    static constexpr const char* kSchema = "maser.script_entry.v1";
};

void to_json(nlohmann::json& j, const ScriptEntry& v);
void from_json(const nlohmann::json& j, ScriptEntry& v);

// Resolution order per request: Exact (reusable), then RolePattern, then the
// next unconsumed Sequence entry. Unresolvable requests raise ScriptExhausted.
// Sequence scripts are single-threaded by contract.
class ScriptedBackend : public ChatBackend {
public:
    explicit ScriptedBackend(std::vector<ScriptEntry> script);

    // Convenience: entries consumed strictly in order.
    static std::unique_ptr<ScriptedBackend> sequence(std::vector<std::string> responses);

    static std::unique_ptr<ScriptedBackend> from_file(const std::string& path);

    const std::vector<ChatRequest>& seen() const { return seen_; }

protected:
    ChatResponse complete_impl(const ChatRequest& request) override;

private:
    std::vector<ScriptEntry> script_;
    std::vector<bool> consumed_;
    int sequence_cursor_ = 0;
    std::vector<size_t> role_counts_;  // indexed by MessageRole
    std::vector<ChatRequest> seen_;
};

// ---------------------------------------------------------------------------
// Record / replay cache
// ---------------------------------------------------------------------------

// Cache layout: one JSON file per response under cache_dir, named
// "<request_key>.json".
std::string cache_entry_path(const std::string& cache_dir, const std::string& key);

// Returns the cached response for the request. Never touches the network;
// throws Error{CacheMiss} with the key when absent.
ChatResponse replay(const std::string& cache_dir, const ChatRequest& request);

// Serves from the cache and delegates misses to `inner`, recording the result.
class RecordingBackend : public ChatBackend {
public:
    RecordingBackend(ChatBackend& inner, std::string cache_dir);

protected:
    ChatResponse complete_impl(const ChatRequest& request) override;

private:
    ChatBackend& inner_;
    std::string cache_dir_;
};

class ReplayBackend : public ChatBackend {
public:
    explicit ReplayBackend(std::string cache_dir);

protected:
    ChatResponse complete_impl(const ChatRequest& request) override;

private:
    std::string cache_dir_;
};

// ---------------------------------------------------------------------------
// Live backend: OpenAI-compatible chat completions over HTTP
// ---------------------------------------------------------------------------

struct LiveConfig {
    std::string base_url;  // e.g. "http://localhost:8000" or "https://api.example.com"
    std::string api_key;   // bearer token; empty means unauthenticated -> AuthMissing
    int timeout_seconds = 120;
    int max_attempts = 3;
    int backoff_base_ms = 500;  // jittered exponential
    std::uint64_t jitter_seed = 0;
};

// POSTs to {base_url}/v1/chat/completions. Transient failures (connect
// errors, 429, 5xx) are retried with jittered exponential backoff; exhausted
// retries surface BackendUnavailable.
class LiveBackend : public ChatBackend {
public:
    explicit LiveBackend(LiveConfig config);

protected:
    ChatResponse complete_impl(const ChatRequest& request) override;

private:
    LiveConfig config_;
    std::uint64_t jitter_state_;
};

// Reads MASER_API_KEY / MASER_BASE_URL from the environment for fields left
// empty in `config`.
std::unique_ptr<LiveBackend> make_live_backend(LiveConfig config);

}  // namespace maser
