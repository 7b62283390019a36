#pragma once

#include "maser/domain.hpp"
#include "maser/gateway.hpp"
#include "maser/templates.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maser {

// ---------------------------------------------------------------------------
// Party parsing (labeled-field rules)
// ---------------------------------------------------------------------------

enum class PartyKind { Individual, Company };

// Canonical per-kind field keys:
//   individual: name, gender, birthdate, ethnicity, address
//   company:    name, address, representative
struct PartyFields {
    PartyKind kind = PartyKind::Individual;
    std::map<std::string, std::string> fields;
};

// Parses a party descriptor using labeled "key: value" pairs when present,
// falling back to positional comma-descriptor rules common in judgment
// documents. Both Chinese and English labels are recognized. Throws
// Error{FieldParseError} when no name can be located.
PartyFields parse_party(const std::string& info);

const std::vector<std::string>& individual_field_keys();
const std::vector<std::string>& company_field_keys();

// ---------------------------------------------------------------------------
// Documents and scenarios
// ---------------------------------------------------------------------------

struct JudgmentDocument {
    std::string doc_id;
    std::string body;
    int year = 0;
    std::string cause_of_action;

    static constexpr const char* kSchema = "maser.judgment.v1";
    bool operator==(const JudgmentDocument&) const = default;
};

struct GroundTruthComplaint {
    std::map<std::string, std::string> client_fields;
    std::map<std::string, std::string> defendant_fields;
    std::string facts_reasons;
    std::string claims;
    std::string evidence;

    bool operator==(const GroundTruthComplaint&) const = default;
};

struct MileScenario {
    std::string scenario_id;
    ClientProfile client_profile;
    GroundTruthComplaint ground_truth;
    std::string legal_attribute;
    std::string persona_source = "big5_pipeline";  // how the profile was produced

    static constexpr const char* kSchema = "maser.scenario.v1";
    bool operator==(const MileScenario&) const = default;
};

void to_json(nlohmann::json& j, const JudgmentDocument& v);
void from_json(const nlohmann::json& j, JudgmentDocument& v);
void to_json(nlohmann::json& j, const GroundTruthComplaint& v);
void from_json(const nlohmann::json& j, GroundTruthComplaint& v);
void to_json(nlohmann::json& j, const MileScenario& v);
void from_json(const nlohmann::json& j, MileScenario& v);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct ExtractOptions {
    std::string model_id;
    double temperature = 0.0;
    int max_tokens = 4096;
};

// Prompts the backend to lift the seven legal elements out of a judgment
// document and validates the parsed result. One repair retry on a structurally
// unparseable reply, then Error{ExtractionParseError}; empty fields propagate
// Error{MissingField}.
LegalElements extract_elements(const JudgmentDocument& doc, ChatBackend& backend,
                               const TemplateStore& templates,
                               const ExtractOptions& options);

// Deterministic rule-based lifting of elements into complaint ground truth.
// No LLM involved; same elements and template always produce the same output.
GroundTruthComplaint derive_ground_truth(const LegalElements& elements,
                                         const std::string& complaint_template);

// Fills the complaint template from ground-truth fields. Used to build
// fixtures and reference documents.
std::string render_ground_truth_complaint(const GroundTruthComplaint& gt,
                                          const std::string& complaint_template);

// Loads scenarios from a line-delimited file. Duplicate scenario ids are
// rejected; malformed lines raise SchemaError with their line number.
std::vector<MileScenario> load_scenarios(const std::string& path);

// Applied to document bodies at ingestion; identity by default. Hook point
// for privacy redaction pipelines.
using RedactionHook = std::function<std::string(const std::string&)>;

// Reads one document per file from a directory (doc_id = file stem) or a
// line-delimited corpus file.
std::vector<JudgmentDocument> load_documents(const std::string& path,
                                             const RedactionHook& redact = {});

struct ExtractOutcome {
    std::string doc_id;
    std::optional<LegalElements> elements;
    std::string error;  // empty on success
};

// Bounded-parallel batch extraction; per-document failures are recorded and
// do not abort the batch. Output order follows input order.
std::vector<ExtractOutcome> extract_corpus(const std::vector<JudgmentDocument>& docs,
                                           ChatBackend& backend,
                                           const TemplateStore& templates,
                                           const ExtractOptions& options, int workers);

}  // namespace maser
