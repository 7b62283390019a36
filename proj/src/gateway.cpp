#include "maser/gateway.hpp"

#include "maser/error.hpp"
#include "maser/hash.hpp"
#include "maser/jsonl.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <thread>

namespace fs = std::filesystem;

namespace maser {

// ---------------------------------------------------------------------------
// Chat types
// ---------------------------------------------------------------------------

const char* message_role_name(MessageRole role) {
    switch (role) {
        case MessageRole::System: return "system";
        case MessageRole::User: return "user";
        case MessageRole::Assistant: return "assistant";
    }
    return "user";
}

MessageRole message_role_from_string(const std::string& name) {
    if (name == "system") return MessageRole::System;
    if (name == "user") return MessageRole::User;
    if (name == "assistant") return MessageRole::Assistant;
    throw Error(ErrorCode::SchemaError, "unknown message role: " + name);
}

void check_chat_request(const ChatRequest& request) {
    if (request.messages.empty()) {
        throw Error(ErrorCode::PreconditionViolation, "chat request has no messages");
    }
    MessageRole first = request.messages.front().role;
    if (first != MessageRole::System && first != MessageRole::User) {
        throw Error(ErrorCode::PreconditionViolation,
                    "first message must be system or user");
    }
    if (request.temperature < 0) {
        throw Error(ErrorCode::PreconditionViolation, "temperature must be >= 0");
    }
    if (request.max_tokens <= 0) {
        throw Error(ErrorCode::PreconditionViolation, "max_tokens must be positive");
    }
}

std::string request_key(const ChatRequest& request) {
    // Canonical form: alphabetically ordered keys, minimal number formatting.
    // max_tokens is deliberately excluded; it does not change the content
    // identity of a request.
    nlohmann::json canon;
    nlohmann::json msgs = nlohmann::json::array();
    for (const ChatMessage& m : request.messages) {
        msgs.push_back({{"content", m.content}, {"role", message_role_name(m.role)}});
    }
    canon["messages"] = msgs;
    canon["model"] = request.model_id;
    if (request.seed) {
        canon["seed"] = *request.seed;
    } else {
        canon["seed"] = nullptr;
    }
    canon["temperature"] = request.temperature;
    return fnv1a64_hex(canon.dump());
}

void to_json(nlohmann::json& j, const ChatMessage& v) {
    j = nlohmann::json{{"role", message_role_name(v.role)}, {"content", v.content}};
}

void from_json(const nlohmann::json& j, ChatMessage& v) {
    v.role = message_role_from_string(j.at("role").get<std::string>());
    j.at("content").get_to(v.content);
}

void to_json(nlohmann::json& j, const ChatRequest& v) {
    j = nlohmann::json{
        {"model", v.model_id},
        {"messages", v.messages},
        {"temperature", v.temperature},
        {"max_tokens", v.max_tokens},
    };
    if (v.seed) j["seed"] = *v.seed;
}

void from_json(const nlohmann::json& j, ChatRequest& v) {
    j.at("model").get_to(v.model_id);
    j.at("messages").get_to(v.messages);
    v.temperature = j.value("temperature", 0.7);
    v.max_tokens = j.value("max_tokens", 2048);
    if (j.contains("seed") && !j.at("seed").is_null()) {
        v.seed = j.at("seed").get<std::int64_t>();
    } else {
        v.seed.reset();
    }
}

void to_json(nlohmann::json& j, const ChatResponse& v) {
    const char* reason = v.finish_reason == FinishReason::Stop     ? "stop"
                         : v.finish_reason == FinishReason::Length ? "length"
                                                                   : "error";
    j = nlohmann::json{
        {"content", v.content},
        {"finish_reason", reason},
        {"usage",
         {{"prompt_tokens", v.usage.prompt_tokens},
          {"completion_tokens", v.usage.completion_tokens}}},
    };
}

void from_json(const nlohmann::json& j, ChatResponse& v) {
    j.at("content").get_to(v.content);
    const std::string reason = j.at("finish_reason").get<std::string>();
    v.finish_reason = reason == "stop"     ? FinishReason::Stop
                      : reason == "length" ? FinishReason::Length
                                           : FinishReason::Error;
    if (j.contains("usage")) {
        v.usage.prompt_tokens = j.at("usage").value("prompt_tokens", 0);
        v.usage.completion_tokens = j.at("usage").value("completion_tokens", 0);
    }
}

ChatResponse ChatBackend::complete(const ChatRequest& request) {
    check_chat_request(request);
    ++calls_;
    return complete_impl(request);
}

// ---------------------------------------------------------------------------
// Scripted backend
// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const ScriptEntry& v) {
    nlohmann::json matcher;
    if (const auto* e = std::get_if<ExactMatcher>(&v.matcher)) {
        matcher = {{"type", "exact"}, {"key", e->key}};
    } else if (const auto* s = std::get_if<SequenceMatcher>(&v.matcher)) {
        matcher = {{"type", "sequence"}, {"index", s->index}};
    } else {
        const auto& r = std::get<RolePatternMatcher>(v.matcher);
        matcher = {{"type", "role_pattern"},
                   {"role", message_role_name(r.role)},
                   {"turn", r.turn}};
    }
    j = nlohmann::json{
        {"schema", ScriptEntry::kSchema},
        {"matcher", matcher},
        {"response", v.response},
    };
}

void from_json(const nlohmann::json& j, ScriptEntry& v) {
    const auto& matcher = j.at("matcher");
    const std::string type = matcher.at("type").get<std::string>();
    if (type == "exact") {
        v.matcher = ExactMatcher{matcher.at("key").get<std::string>()};
    } else if (type == "sequence") {
        v.matcher = SequenceMatcher{matcher.at("index").get<int>()};
    } else if (type == "role_pattern") {
        v.matcher = RolePatternMatcher{
            message_role_from_string(matcher.at("role").get<std::string>()),
            matcher.at("turn").get<int>()};
    } else {
        throw Error(ErrorCode::SchemaError, "unknown script matcher type: " + type);
    }
    j.at("response").get_to(v.response);
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script)
    : script_(std::move(script)),
      consumed_(script_.size(), false),
      role_counts_(3, 0) {}

std::unique_ptr<ScriptedBackend> ScriptedBackend::sequence(
    std::vector<std::string> responses) {
    std::vector<ScriptEntry> script;
    script.reserve(responses.size());
    for (size_t i = 0; i < responses.size(); ++i) {
        script.push_back({SequenceMatcher{static_cast<int>(i)}, std::move(responses[i])});
    }
    return std::make_unique<ScriptedBackend>(std::move(script));
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::string& path) {
    return std::make_unique<ScriptedBackend>(read_jsonl<ScriptEntry>(path));
}

ChatResponse ScriptedBackend::complete_impl(const ChatRequest& request) {
    seen_.push_back(request);
    const std::string key = request_key(request);
    const MessageRole last_role = request.messages.back().role;
    const size_t role_turn = role_counts_[static_cast<size_t>(last_role)]++;

    // Exact entries are reusable and take precedence.
    for (const ScriptEntry& entry : script_) {
        if (const auto* e = std::get_if<ExactMatcher>(&entry.matcher)) {
            if (e->key == key) {
                return ChatResponse{entry.response, FinishReason::Stop, {}};
            }
        }
    }
    for (size_t i = 0; i < script_.size(); ++i) {
        if (consumed_[i]) continue;
        if (const auto* r = std::get_if<RolePatternMatcher>(&script_[i].matcher)) {
            if (r->role == last_role && r->turn == static_cast<int>(role_turn)) {
                consumed_[i] = true;
                return ChatResponse{script_[i].response, FinishReason::Stop, {}};
            }
        }
    }
    for (size_t i = 0; i < script_.size(); ++i) {
        if (consumed_[i]) continue;
        if (const auto* s = std::get_if<SequenceMatcher>(&script_[i].matcher)) {
            if (s->index == sequence_cursor_) {
                consumed_[i] = true;
                ++sequence_cursor_;
                return ChatResponse{script_[i].response, FinishReason::Stop, {}};
            }
        }
    }
    throw Error(ErrorCode::ScriptExhausted,
                "no script entry resolves request " + key + " (call " +
                    std::to_string(calls()) + ")");
}

// ---------------------------------------------------------------------------
// Record / replay
// ---------------------------------------------------------------------------

std::string cache_entry_path(const std::string& cache_dir, const std::string& key) {
    return (fs::path(cache_dir) / (key + ".json")).string();
}

ChatResponse replay(const std::string& cache_dir, const ChatRequest& request) {
    const std::string key = request_key(request);
    const std::string path = cache_entry_path(cache_dir, key);
    if (!fs::exists(path)) {
        throw Error(ErrorCode::CacheMiss, key);
    }
    nlohmann::json entry = nlohmann::json::parse(read_text_file(path));
    return entry.at("response").get<ChatResponse>();
}

RecordingBackend::RecordingBackend(ChatBackend& inner, std::string cache_dir)
    : inner_(inner), cache_dir_(std::move(cache_dir)) {
    fs::create_directories(cache_dir_);
}

ChatResponse RecordingBackend::complete_impl(const ChatRequest& request) {
    const std::string key = request_key(request);
    const std::string path = cache_entry_path(cache_dir_, key);
    if (fs::exists(path)) {
        nlohmann::json entry = nlohmann::json::parse(read_text_file(path));
        return entry.at("response").get<ChatResponse>();
    }
    ChatResponse response = inner_.complete(request);
    nlohmann::json entry{
        {"schema", "maser.cache.v1"},
        {"request_key", key},
        {"request", request},
        {"response", response},
    };
    const std::string tmp = path + ".tmp";
    write_text_file(tmp, entry.dump() + "\n");
    fs::rename(tmp, path);
    return response;
}

ReplayBackend::ReplayBackend(std::string cache_dir)
    : cache_dir_(std::move(cache_dir)) {}

ChatResponse ReplayBackend::complete_impl(const ChatRequest& request) {
    return replay(cache_dir_, request);
}

// ---------------------------------------------------------------------------
// Live backend
// ---------------------------------------------------------------------------

namespace {

// Splits "http(s)://host:port" from a path prefix, if any.
struct ParsedUrl {
    std::string origin;
    std::string path_prefix;
};

ParsedUrl parse_base_url(const std::string& base_url) {
    const size_t scheme = base_url.find("://");
    if (scheme == std::string::npos) {
        throw Error(ErrorCode::ConfigError, "base_url must include a scheme: " + base_url);
    }
    const size_t path = base_url.find('/', scheme + 3);
    if (path == std::string::npos) {
        return {base_url, ""};
    }
    std::string prefix = base_url.substr(path);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path), prefix};
}

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

LiveBackend::LiveBackend(LiveConfig config)
    : config_(std::move(config)), jitter_state_(config_.jitter_seed * 6364136223846793005ULL + 1442695040888963407ULL) {}

ChatResponse LiveBackend::complete_impl(const ChatRequest& request) {
    if (config_.api_key.empty()) {
        throw Error(ErrorCode::AuthMissing,
                    "no API credential; set MASER_API_KEY or configure api_key");
    }
    if (config_.base_url.empty()) {
        throw Error(ErrorCode::ConfigError, "live backend has no base_url");
    }
    ParsedUrl url = parse_base_url(config_.base_url);

    nlohmann::json body{
        {"model", request.model_id},
        {"messages", nlohmann::json::array()},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };
    for (const ChatMessage& m : request.messages) {
        body["messages"].push_back(
            {{"role", message_role_name(m.role)}, {"content", m.content}});
    }
    if (request.seed) body["seed"] = *request.seed;
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        if (attempt > 0) {
            // Jittered exponential backoff.
            jitter_state_ = jitter_state_ * 6364136223846793005ULL + 1442695040888963407ULL;
            const int base = config_.backoff_base_ms << (attempt - 1);
            const int jitter = static_cast<int>(jitter_state_ % 100);
            std::this_thread::sleep_for(std::chrono::milliseconds(base + jitter));
        }
        httplib::Client client(url.origin);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        client.set_write_timeout(config_.timeout_seconds, 0);
        client.set_bearer_token_auth(config_.api_key);

        auto result = client.Post(url.path_prefix + "/v1/chat/completions", payload,
                                  "application/json");
        if (!result) {
            last_error = "connection failed: " + httplib::to_string(result.error());
            continue;
        }
        if (retryable_status(result->status)) {
            last_error = "HTTP " + std::to_string(result->status);
            continue;
        }
        if (result->status != 200) {
            throw Error(ErrorCode::BackendUnavailable,
                        "HTTP " + std::to_string(result->status) + ": " + result->body);
        }
        try {
            nlohmann::json reply = nlohmann::json::parse(result->body);
            const auto& choice = reply.at("choices").at(0);
            ChatResponse response;
            response.content = choice.at("message").at("content").get<std::string>();
            const std::string reason = choice.value("finish_reason", "stop");
            response.finish_reason = reason == "stop"     ? FinishReason::Stop
                                     : reason == "length" ? FinishReason::Length
                                                          : FinishReason::Error;
            if (reply.contains("usage")) {
                response.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
                response.usage.completion_tokens =
                    reply["usage"].value("completion_tokens", 0);
            }
            return response;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::BackendUnavailable,
                        std::string("malformed completion response: ") + e.what());
        }
    }
    throw Error(ErrorCode::BackendUnavailable,
                "exhausted " + std::to_string(config_.max_attempts) +
                    " attempts; last error: " + last_error);
}

std::unique_ptr<LiveBackend> make_live_backend(LiveConfig config) {
    if (config.api_key.empty()) {
        if (const char* key = std::getenv("MASER_API_KEY")) config.api_key = key;
    }
    if (config.base_url.empty()) {
        if (const char* url = std::getenv("MASER_BASE_URL")) config.base_url = url;
    }
    return std::make_unique<LiveBackend>(std::move(config));
}

}  // namespace maser
