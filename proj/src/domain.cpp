#include "maser/domain.hpp"

#include "maser/error.hpp"
#include "maser/strings.hpp"

#include <array>

namespace maser {

namespace {

void check_schema(const nlohmann::json& j, const char* expected) {
    if (j.contains("schema") && j.at("schema").get<std::string>() != expected) {
        throw Error(ErrorCode::SchemaError,
                    "expected schema " + std::string(expected) + ", got " +
                        j.at("schema").get<std::string>());
    }
}

TraitLevel trait_level_from_string(const std::string& s) {
    if (s == "high") return TraitLevel::High;
    if (s == "medium") return TraitLevel::Medium;
    if (s == "low") return TraitLevel::Low;
    throw Error(ErrorCode::SchemaError, "unknown trait level: " + s);
}

// Legal-sense catalog: five expert-style literacy levels, lowest to highest.
const std::array<const char*, 5> kLegalSenseCatalog = {
    "Completely lacks legal knowledge and cannot use legal terminology such as "
    "\"rights\" or \"obligations\"; responses stay with a plain description of events.",
    "Has basic legal awareness and knows simple terms such as \"litigation\" or "
    "\"breach of contract\" without fully grasping their meaning; may use terms "
    "inappropriately while focusing on the concrete situation.",
    "Possesses foundational legal knowledge and can correctly use everyday legal "
    "terms such as \"contract terms\" or \"litigation\" when describing the situation.",
    "Familiar with basic legal terminology and able to accurately use more complex "
    "legal terms and concepts, such as \"right to litigate\" or \"enforcement of judgment\".",
    "Highly proficient in legal knowledge, familiar with fundamental legal provisions, "
    "able to describe legal issues in detail and to propose strategies or defense "
    "points that may benefit the case.",
};

}  // namespace

// ---------------------------------------------------------------------------
// Legal elements
// ---------------------------------------------------------------------------

const std::vector<std::string>& legal_element_field_names() {
    static const std::vector<std::string> names = {
        "plaintiff_info", "defendant_info", "claim",           "case_detail",
        "evidence",       "case_analysis",  "legal_provisions",
    };
    return names;
}

std::string* element_field(LegalElements& e, const std::string& name) {
    if (name == "plaintiff_info") return &e.plaintiff_info;
    if (name == "defendant_info") return &e.defendant_info;
    if (name == "claim") return &e.claim;
    if (name == "case_detail") return &e.case_detail;
    if (name == "evidence") return &e.evidence;
    if (name == "case_analysis") return &e.case_analysis;
    if (name == "legal_provisions") return &e.legal_provisions;
    return nullptr;
}

const std::string* element_field(const LegalElements& e, const std::string& name) {
    return element_field(const_cast<LegalElements&>(e), name);
}

LegalElements validate_legal_elements(const LegalElements& elements) {
    LegalElements out = elements;
    std::vector<std::string> missing;
    for (const auto& name : legal_element_field_names()) {
        std::string* field = element_field(out, name);
        *field = trim(*field);
        if (field->empty()) missing.push_back(name);
    }
    if (!missing.empty()) {
        throw Error(ErrorCode::MissingField, join(missing, ", "));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Personas
// ---------------------------------------------------------------------------

const char* trait_level_name(TraitLevel level) {
    switch (level) {
        case TraitLevel::High: return "high";
        case TraitLevel::Medium: return "medium";
        case TraitLevel::Low: return "low";
    }
    return "medium";
}

const std::vector<std::string>& trait_dimension_names() {
    static const std::vector<std::string> names = {
        "extraversion", "emotional_stability", "openness",
        "agreeableness", "conscientiousness",
    };
    return names;
}

TraitLevel trait_dimension(const TraitVector& v, const std::string& name) {
    if (name == "extraversion") return v.extraversion;
    if (name == "emotional_stability") return v.emotional_stability;
    if (name == "openness") return v.openness;
    if (name == "agreeableness") return v.agreeableness;
    if (name == "conscientiousness") return v.conscientiousness;
    throw Error(ErrorCode::SchemaError, "unknown trait dimension: " + name);
}

void set_trait_dimension(TraitVector& v, const std::string& name, TraitLevel level) {
    if (name == "extraversion") v.extraversion = level;
    else if (name == "emotional_stability") v.emotional_stability = level;
    else if (name == "openness") v.openness = level;
    else if (name == "agreeableness") v.agreeableness = level;
    else if (name == "conscientiousness") v.conscientiousness = level;
    else throw Error(ErrorCode::SchemaError, "unknown trait dimension: " + name);
}

LegalSense make_legal_sense(int level) {
    if (level < 1 || level > 5) {
        throw Error(ErrorCode::InvalidLevel,
                    "legal sense level must be in [1,5], got " + std::to_string(level));
    }
    return LegalSense{level, kLegalSenseCatalog[static_cast<size_t>(level - 1)]};
}

// ---------------------------------------------------------------------------
// Agenda
// ---------------------------------------------------------------------------

Agenda default_agenda() {
    return Agenda{{
        {1, "Client's Basic Information",
         "Name, gender, date of birth, ethnicity, and address."},
        {2, "Defendant's Basic Information",
         "Name, gender, date of birth, ethnicity and address for an individual; "
         "company name, address and legal representative for a company."},
        {3, "Basic Case Information",
         "The time, place, full details of the event, and key points of contention."},
        {4, "Client's Claims",
         "What outcome is desired from this lawsuit, such as compensation amount "
         "or specific actions requested from the other party."},
        {5, "Litigation Costs",
         "Whether the plaintiff seeks to have the defendant cover the litigation costs."},
        {6, "Evidence",
         "Contracts, agreements, receipts, physical evidence, witness information "
         "or testimony, recordings, expert reports, videos, etc."},
        {7, "Adverse Evidence and Other Information",
         "Any adverse evidence from the defendant or other relevant information."},
    }};
}

const char* distractor_kind_name(DistractorKind kind) {
    switch (kind) {
        case DistractorKind::MissingDetail: return "missing_detail";
        case DistractorKind::Vagueness: return "vagueness";
    }
    return "missing_detail";
}

// ---------------------------------------------------------------------------
// Transcript
// ---------------------------------------------------------------------------

const char* role_name(Role role) {
    return role == Role::Client ? "client" : "lawyer";
}

void check_verdict(const Verdict& verdict) {
    if (verdict.status == VerdictStatus::Correct && !verdict.suggestions.empty()) {
        throw Error(ErrorCode::InvariantViolation,
                    "correct verdict must carry no suggestions");
    }
    if (verdict.status == VerdictStatus::Revise && verdict.suggestions.empty()) {
        throw Error(ErrorCode::InvariantViolation,
                    "revise verdict must carry suggestions");
    }
}

void check_transcript(const Transcript& transcript, int max_turns) {
    if (transcript.rounds.empty()) {
        throw Error(ErrorCode::TranscriptInvariantViolation,
                    "transcript has no rounds");
    }
    if (max_turns > 0 && static_cast<int>(transcript.rounds.size()) > max_turns) {
        throw Error(ErrorCode::TranscriptInvariantViolation,
                    "transcript exceeds max turns");
    }
    for (const Round& round : transcript.rounds) {
        if (round.client.role != Role::Client || round.lawyer.role != Role::Lawyer) {
            throw Error(ErrorCode::TranscriptInvariantViolation,
                        "round does not alternate client then lawyer");
        }
        check_verdict(round.client.verdict);
        check_verdict(round.lawyer.verdict);
        for (const Utterance* u : {&round.client, &round.lawyer}) {
            if (u->verdict.status == VerdictStatus::Correct && u->committed != u->draft) {
                throw Error(ErrorCode::TranscriptInvariantViolation,
                            "correct verdict but committed text differs from draft");
            }
        }
    }
    if (transcript.complaint.empty()) {
        throw Error(ErrorCode::TranscriptInvariantViolation,
                    "transcript is missing the complaint");
    }
}

// ---------------------------------------------------------------------------
// JSON bindings
// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const LegalElements& v) {
    j = nlohmann::json{
        {"schema", LegalElements::kSchema},
        {"plaintiff_info", v.plaintiff_info},
        {"defendant_info", v.defendant_info},
        {"claim", v.claim},
        {"case_detail", v.case_detail},
        {"evidence", v.evidence},
        {"case_analysis", v.case_analysis},
        {"legal_provisions", v.legal_provisions},
    };
}

void from_json(const nlohmann::json& j, LegalElements& v) {
    check_schema(j, LegalElements::kSchema);
    j.at("plaintiff_info").get_to(v.plaintiff_info);
    j.at("defendant_info").get_to(v.defendant_info);
    j.at("claim").get_to(v.claim);
    j.at("case_detail").get_to(v.case_detail);
    j.at("evidence").get_to(v.evidence);
    j.at("case_analysis").get_to(v.case_analysis);
    j.at("legal_provisions").get_to(v.legal_provisions);
}

void to_json(nlohmann::json& j, const TraitVector& v) {
    j = nlohmann::json::object();
    for (const auto& dim : trait_dimension_names()) {
        j[dim] = trait_level_name(trait_dimension(v, dim));
    }
}

void from_json(const nlohmann::json& j, TraitVector& v) {
    for (const auto& dim : trait_dimension_names()) {
        set_trait_dimension(v, dim, trait_level_from_string(j.at(dim).get<std::string>()));
    }
}

void to_json(nlohmann::json& j, const SpeakingStyle& v) {
    j = nlohmann::json{{"logic", v.logic}, {"clarity", v.clarity}, {"tone", v.tone}};
}

void from_json(const nlohmann::json& j, SpeakingStyle& v) {
    j.at("logic").get_to(v.logic);
    j.at("clarity").get_to(v.clarity);
    j.at("tone").get_to(v.tone);
}

void to_json(nlohmann::json& j, const Persona& v) {
    j = nlohmann::json{
        {"traits", v.traits},
        {"description", v.description},
        {"speaking_style", v.speaking_style},
        {"interactivity", v.interactivity},
    };
}

void from_json(const nlohmann::json& j, Persona& v) {
    j.at("traits").get_to(v.traits);
    j.at("description").get_to(v.description);
    j.at("speaking_style").get_to(v.speaking_style);
    j.at("interactivity").get_to(v.interactivity);
}

void to_json(nlohmann::json& j, const LegalSense& v) {
    j = nlohmann::json{{"level", v.level}, {"description", v.description}};
}

void from_json(const nlohmann::json& j, LegalSense& v) {
    j.at("level").get_to(v.level);
    j.at("description").get_to(v.description);
    if (v.level < 1 || v.level > 5) {
        throw Error(ErrorCode::InvalidLevel,
                    "legal sense level out of range: " + std::to_string(v.level));
    }
}

void to_json(nlohmann::json& j, const AgendaStage& v) {
    j = nlohmann::json{{"id", v.id}, {"title", v.title}, {"instruction", v.instruction}};
}

void from_json(const nlohmann::json& j, AgendaStage& v) {
    j.at("id").get_to(v.id);
    j.at("title").get_to(v.title);
    j.at("instruction").get_to(v.instruction);
}

void to_json(nlohmann::json& j, const Agenda& v) {
    j = nlohmann::json{{"stages", v.stages}};
}

void from_json(const nlohmann::json& j, Agenda& v) {
    j.at("stages").get_to(v.stages);
}

void to_json(nlohmann::json& j, const DistractorDirective& v) {
    j = nlohmann::json{
        {"stage_id", v.stage_id},
        {"kind", distractor_kind_name(v.kind)},
        {"target_hint", v.target_hint},
    };
}

void from_json(const nlohmann::json& j, DistractorDirective& v) {
    j.at("stage_id").get_to(v.stage_id);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "missing_detail") {
        v.kind = DistractorKind::MissingDetail;
    } else if (kind == "vagueness") {
        v.kind = DistractorKind::Vagueness;
    } else {
        throw Error(ErrorCode::SchemaError, "unknown distractor kind: " + kind);
    }
    j.at("target_hint").get_to(v.target_hint);
    if (v.stage_id < 1 || v.stage_id > 7) {
        throw Error(ErrorCode::InvariantViolation,
                    "distractor stage out of range: " + std::to_string(v.stage_id));
    }
}

void to_json(nlohmann::json& j, const ClientProfile& v) {
    j = nlohmann::json{
        {"schema", ClientProfile::kSchema},
        {"personal_info", v.personal_info},
        {"case_info", v.case_info},
        {"persona", v.persona},
        {"legal_sense", v.legal_sense},
        {"distractor_plan", v.distractor_plan},
    };
}

void from_json(const nlohmann::json& j, ClientProfile& v) {
    check_schema(j, ClientProfile::kSchema);
    j.at("personal_info").get_to(v.personal_info);
    j.at("case_info").get_to(v.case_info);
    j.at("persona").get_to(v.persona);
    j.at("legal_sense").get_to(v.legal_sense);
    j.at("distractor_plan").get_to(v.distractor_plan);
}

void to_json(nlohmann::json& j, const LawyerProfile& v) {
    j = nlohmann::json{
        {"schema", LawyerProfile::kSchema},
        {"case_analysis", v.case_analysis},
        {"legal_provisions", v.legal_provisions},
        {"agenda", v.agenda},
        {"complaint_template", v.complaint_template},
    };
}

void from_json(const nlohmann::json& j, LawyerProfile& v) {
    check_schema(j, LawyerProfile::kSchema);
    j.at("case_analysis").get_to(v.case_analysis);
    j.at("legal_provisions").get_to(v.legal_provisions);
    j.at("agenda").get_to(v.agenda);
    j.at("complaint_template").get_to(v.complaint_template);
}

void to_json(nlohmann::json& j, const Verdict& v) {
    j = nlohmann::json{
        {"status", v.status == VerdictStatus::Correct ? "correct" : "revise"},
        {"suggestions", v.suggestions},
    };
}

void from_json(const nlohmann::json& j, Verdict& v) {
    const std::string status = j.at("status").get<std::string>();
    if (status == "correct") {
        v.status = VerdictStatus::Correct;
    } else if (status == "revise") {
        v.status = VerdictStatus::Revise;
    } else {
        throw Error(ErrorCode::SchemaError, "unknown verdict status: " + status);
    }
    j.at("suggestions").get_to(v.suggestions);
}

void to_json(nlohmann::json& j, const Utterance& v) {
    j = nlohmann::json{
        {"role", role_name(v.role)},
        {"draft", v.draft},
        {"verdict", v.verdict},
        {"committed", v.committed},
    };
}

void from_json(const nlohmann::json& j, Utterance& v) {
    const std::string role = j.at("role").get<std::string>();
    if (role == "client") {
        v.role = Role::Client;
    } else if (role == "lawyer") {
        v.role = Role::Lawyer;
    } else {
        throw Error(ErrorCode::SchemaError, "unknown utterance role: " + role);
    }
    j.at("draft").get_to(v.draft);
    j.at("verdict").get_to(v.verdict);
    j.at("committed").get_to(v.committed);
}

void to_json(nlohmann::json& j, const Round& v) {
    j = nlohmann::json{{"client", v.client}, {"lawyer", v.lawyer}};
}

void from_json(const nlohmann::json& j, Round& v) {
    j.at("client").get_to(v.client);
    j.at("lawyer").get_to(v.lawyer);
}

void to_json(nlohmann::json& j, const Transcript& v) {
    j = nlohmann::json{
        {"schema", Transcript::kSchema},
        {"case_id", v.case_id},
        {"rounds", v.rounds},
        {"ended_by", v.ended_by == EndReason::EndMarker ? "end_marker" : "max_turns"},
        {"complaint", v.complaint},
    };
}

void from_json(const nlohmann::json& j, Transcript& v) {
    check_schema(j, Transcript::kSchema);
    j.at("case_id").get_to(v.case_id);
    j.at("rounds").get_to(v.rounds);
    const std::string ended = j.at("ended_by").get<std::string>();
    if (ended == "end_marker") {
        v.ended_by = EndReason::EndMarker;
    } else if (ended == "max_turns") {
        v.ended_by = EndReason::MaxTurns;
    } else {
        throw Error(ErrorCode::SchemaError, "unknown end reason: " + ended);
    }
    j.at("complaint").get_to(v.complaint);
}

}  // namespace maser
