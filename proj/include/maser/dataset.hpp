#pragma once

#include "maser/domain.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace maser {

// ---------------------------------------------------------------------------
// SFT training records
// ---------------------------------------------------------------------------

enum class SftRole { System, Client, Lawyer };

const char* sft_role_name(SftRole role);

struct SftMessage {
    SftRole role = SftRole::Client;
    std::string content;

    bool operator==(const SftMessage&) const = default;
};

// Token-agnostic training record: alternating role messages plus a loss mask
// selecting exactly the lawyer's responses. Token-level expansion belongs to
// the downstream trainer.
struct SftExample {
    std::string case_id;
    std::vector<SftMessage> messages;
    std::vector<bool> train_mask;  // aligned to messages; true <=> lawyer

    static constexpr const char* kSchema = "maser.sft.v1";
    bool operator==(const SftExample&) const = default;
};

void to_json(nlohmann::json& j, const SftExample& v);
void from_json(const nlohmann::json& j, SftExample& v);

// Throws Error{InvariantViolation} when the mask misaligns with roles or the
// final message is not a lawyer turn.
void check_sft_example(const SftExample& example);

struct ExportOptions {
    // Off by default: dialogue-only records. When set, a rendered system
    // message is prepended (masked out of the loss).
    bool prepend_system = false;
    std::string system_text;
};

// Converts a completed transcript into one training example: committed
// utterances in order, complaint appended as the final lawyer message,
// drafts dropped. Throws Error{IncompleteTranscript} when the complaint is
// missing or there are no rounds.
SftExample export_sft(const Transcript& transcript, const ExportOptions& options = {});

// One record per line, UTF-8. Returns the number written.
size_t write_sft_jsonl(const std::vector<SftExample>& examples, const std::string& path);

std::vector<SftExample> read_sft_jsonl(const std::string& path);

struct MaskStats {
    size_t lawyer_msgs = 0;
    size_t client_msgs = 0;
    double masked_fraction = 0.0;
};

// Validates the example, then reports message counts and the masked share.
MaskStats mask_stats(const SftExample& example);

}  // namespace maser
