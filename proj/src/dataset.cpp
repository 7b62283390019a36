#include "maser/dataset.hpp"

#include "maser/error.hpp"
#include "maser/jsonl.hpp"

namespace maser {

const char* sft_role_name(SftRole role) {
    switch (role) {
        case SftRole::System: return "system";
        case SftRole::Client: return "client";
        case SftRole::Lawyer: return "lawyer";
    }
    return "client";
}

namespace {

SftRole sft_role_from_string(const std::string& name) {
    if (name == "system") return SftRole::System;
    if (name == "client") return SftRole::Client;
    if (name == "lawyer") return SftRole::Lawyer;
    throw Error(ErrorCode::SchemaError, "unknown sft role: " + name);
}

}  // namespace

void to_json(nlohmann::json& j, const SftExample& v) {
    nlohmann::json messages = nlohmann::json::array();
    for (const SftMessage& m : v.messages) {
        messages.push_back({{"role", sft_role_name(m.role)}, {"content", m.content}});
    }
    j = nlohmann::json{
        {"schema", SftExample::kSchema},
        {"case_id", v.case_id},
        {"messages", messages},
        {"train_mask", v.train_mask},
    };
}

void from_json(const nlohmann::json& j, SftExample& v) {
    if (j.contains("schema") && j.at("schema").get<std::string>() != SftExample::kSchema) {
        throw Error(ErrorCode::SchemaError,
                    "expected schema " + std::string(SftExample::kSchema));
    }
    j.at("case_id").get_to(v.case_id);
    v.messages.clear();
    for (const auto& m : j.at("messages")) {
        v.messages.push_back({sft_role_from_string(m.at("role").get<std::string>()),
                              m.at("content").get<std::string>()});
    }
    v.train_mask = j.at("train_mask").get<std::vector<bool>>();
}

void check_sft_example(const SftExample& example) {
    if (example.messages.size() != example.train_mask.size()) {
        throw Error(ErrorCode::InvariantViolation,
                    "train_mask length differs from message count");
    }
    if (example.messages.empty()) {
        throw Error(ErrorCode::InvariantViolation, "sft example has no messages");
    }
    for (size_t i = 0; i < example.messages.size(); ++i) {
        const bool is_lawyer = example.messages[i].role == SftRole::Lawyer;
        if (example.train_mask[i] != is_lawyer) {
            throw Error(ErrorCode::InvariantViolation,
                        "mask[" + std::to_string(i) + "] must select lawyer messages only");
        }
    }
    if (example.messages.back().role != SftRole::Lawyer) {
        throw Error(ErrorCode::InvariantViolation,
                    "final message must be the lawyer's complaint");
    }
}

SftExample export_sft(const Transcript& transcript, const ExportOptions& options) {
    if (transcript.rounds.empty() || transcript.complaint.empty()) {
        throw Error(ErrorCode::IncompleteTranscript,
                    "transcript must have rounds and a complaint");
    }
    SftExample example;
    example.case_id = transcript.case_id;
    if (options.prepend_system) {
        example.messages.push_back({SftRole::System, options.system_text});
    }
    for (const Round& round : transcript.rounds) {
        example.messages.push_back({SftRole::Client, round.client.committed});
        example.messages.push_back({SftRole::Lawyer, round.lawyer.committed});
    }
    example.messages.push_back({SftRole::Lawyer, transcript.complaint});
    example.train_mask.reserve(example.messages.size());
    for (const SftMessage& m : example.messages) {
        example.train_mask.push_back(m.role == SftRole::Lawyer);
    }
    check_sft_example(example);
    return example;
}

size_t write_sft_jsonl(const std::vector<SftExample>& examples, const std::string& path) {
    for (const SftExample& example : examples) check_sft_example(example);
    return write_jsonl(examples, path);
}

std::vector<SftExample> read_sft_jsonl(const std::string& path) {
    return read_jsonl<SftExample>(path);
}

MaskStats mask_stats(const SftExample& example) {
    check_sft_example(example);
    MaskStats stats;
    for (const SftMessage& m : example.messages) {
        if (m.role == SftRole::Lawyer) {
            ++stats.lawyer_msgs;
        } else if (m.role == SftRole::Client) {
            ++stats.client_msgs;
        }
    }
    stats.masked_fraction =
        static_cast<double>(stats.lawyer_msgs) / static_cast<double>(example.messages.size());
    return stats;
}

}  // namespace maser
