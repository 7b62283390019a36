#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace maser {

// ---------------------------------------------------------------------------
// Legal elements
// ---------------------------------------------------------------------------

// The seven elements lifted from one judgment document. They form the shared
// factual substrate every role profile is cut from.
struct LegalElements {
    std::string plaintiff_info;
    std::string defendant_info;
    std::string claim;
    std::string case_detail;
    std::string evidence;
    std::string case_analysis;
    std::string legal_provisions;

    static constexpr const char* kSchema = "maser.elements.v1";
};

// Trims every field; throws Error{MissingField} naming each empty field.
LegalElements validate_legal_elements(const LegalElements& elements);

// Field names in canonical order, shared by validation, extraction and
// serialization.
const std::vector<std::string>& legal_element_field_names();

std::string* element_field(LegalElements& e, const std::string& name);
const std::string* element_field(const LegalElements& e, const std::string& name);

// ---------------------------------------------------------------------------
// Personas
// ---------------------------------------------------------------------------

enum class TraitLevel { Low, Medium, High };

const char* trait_level_name(TraitLevel level);

struct TraitVector {
    TraitLevel extraversion = TraitLevel::Medium;
    TraitLevel emotional_stability = TraitLevel::Medium;
    TraitLevel openness = TraitLevel::Medium;
    TraitLevel agreeableness = TraitLevel::Medium;
    TraitLevel conscientiousness = TraitLevel::Medium;

    bool operator==(const TraitVector&) const = default;
};

const std::vector<std::string>& trait_dimension_names();

TraitLevel trait_dimension(const TraitVector& v, const std::string& name);
void set_trait_dimension(TraitVector& v, const std::string& name, TraitLevel level);

struct SpeakingStyle {
    std::string logic;
    std::string clarity;
    std::string tone;

    bool operator==(const SpeakingStyle&) const = default;
};

struct Persona {
    TraitVector traits;
    std::string description;
    SpeakingStyle speaking_style;
    std::string interactivity;

    bool operator==(const Persona&) const = default;
};

// Client legal literacy, level 1 (none) to 5 (proficient). The description
// is fixed by the catalog; construct through make_legal_sense.
struct LegalSense {
    int level = 1;
    std::string description;

    bool operator==(const LegalSense&) const = default;
};

// Returns the catalog entry for `level`; throws Error{InvalidLevel} outside [1,5].
LegalSense make_legal_sense(int level);

// ---------------------------------------------------------------------------
// Agenda
// ---------------------------------------------------------------------------

struct AgendaStage {
    int id = 0;
    std::string title;
    std::string instruction;

    bool operator==(const AgendaStage&) const = default;
};

struct Agenda {
    std::vector<AgendaStage> stages;

    bool operator==(const Agenda&) const = default;
};

// The default seven-stage complaint-drafting agenda, ids 1..7 ascending.
Agenda default_agenda();

// ---------------------------------------------------------------------------
// Distractors and profiles
// ---------------------------------------------------------------------------

enum class DistractorKind { MissingDetail, Vagueness };

const char* distractor_kind_name(DistractorKind kind);

struct DistractorDirective {
    int stage_id = 1;  // 1..7
    DistractorKind kind = DistractorKind::MissingDetail;
    std::string target_hint;

    bool operator==(const DistractorDirective&) const = default;
};

struct ClientProfile {
    std::string personal_info;  // from plaintiff_info
    std::string case_info;      // claim + case_detail + evidence
    Persona persona;
    LegalSense legal_sense;
    std::vector<DistractorDirective> distractor_plan;

    static constexpr const char* kSchema = "maser.client_profile.v1";
    bool operator==(const ClientProfile&) const = default;
};

struct LawyerProfile {
    std::string case_analysis;
    std::string legal_provisions;
    Agenda agenda;
    std::string complaint_template;

    static constexpr const char* kSchema = "maser.lawyer_profile.v1";
    bool operator==(const LawyerProfile&) const = default;
};

// ---------------------------------------------------------------------------
// Transcript
// ---------------------------------------------------------------------------

enum class Role { Client, Lawyer };

const char* role_name(Role role);

enum class VerdictStatus { Correct, Revise };

struct Verdict {
    VerdictStatus status = VerdictStatus::Correct;
    std::string suggestions;  // empty iff Correct

    bool operator==(const Verdict&) const = default;
};

// Throws Error{InvariantViolation} when status and suggestions disagree.
void check_verdict(const Verdict& verdict);

struct Utterance {
    Role role = Role::Client;
    std::string draft;
    Verdict verdict;
    std::string committed;

    bool operator==(const Utterance&) const = default;
};

struct Round {
    Utterance client;
    Utterance lawyer;

    bool operator==(const Round&) const = default;
};

enum class EndReason { EndMarker, MaxTurns };

struct Transcript {
    std::string case_id;
    std::vector<Round> rounds;
    EndReason ended_by = EndReason::MaxTurns;
    std::string complaint;

    static constexpr const char* kSchema = "maser.transcript.v1";
    bool operator==(const Transcript&) const = default;
};

// Enforces round alternation, the 1..max_turns bound and complaint presence.
// Throws Error{TranscriptInvariantViolation}.
void check_transcript(const Transcript& transcript, int max_turns);

// ---------------------------------------------------------------------------
// JSON bindings (line-delimited persistence uses these)
// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const LegalElements& v);
void from_json(const nlohmann::json& j, LegalElements& v);
void to_json(nlohmann::json& j, const TraitVector& v);
void from_json(const nlohmann::json& j, TraitVector& v);
void to_json(nlohmann::json& j, const SpeakingStyle& v);
void from_json(const nlohmann::json& j, SpeakingStyle& v);
void to_json(nlohmann::json& j, const Persona& v);
void from_json(const nlohmann::json& j, Persona& v);
void to_json(nlohmann::json& j, const LegalSense& v);
void from_json(const nlohmann::json& j, LegalSense& v);
void to_json(nlohmann::json& j, const AgendaStage& v);
void from_json(const nlohmann::json& j, AgendaStage& v);
void to_json(nlohmann::json& j, const Agenda& v);
void from_json(const nlohmann::json& j, Agenda& v);
void to_json(nlohmann::json& j, const DistractorDirective& v);
void from_json(const nlohmann::json& j, DistractorDirective& v);
void to_json(nlohmann::json& j, const ClientProfile& v);
void from_json(const nlohmann::json& j, ClientProfile& v);
void to_json(nlohmann::json& j, const LawyerProfile& v);
void from_json(const nlohmann::json& j, LawyerProfile& v);
void to_json(nlohmann::json& j, const Verdict& v);
void from_json(const nlohmann::json& j, Verdict& v);
void to_json(nlohmann::json& j, const Utterance& v);
void from_json(const nlohmann::json& j, Utterance& v);
void to_json(nlohmann::json& j, const Round& v);
void from_json(const nlohmann::json& j, Round& v);
void to_json(nlohmann::json& j, const Transcript& v);
void from_json(const nlohmann::json& j, Transcript& v);

}  // namespace maser
