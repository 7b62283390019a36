#include "maser/persona.hpp"

#include "maser/error.hpp"
#include "maser/json_util.hpp"
#include "maser/strings.hpp"

namespace maser {

double Rng::uniform01() {
    // Top 53 bits scaled into [0,1); identical everywhere mt19937_64 is.
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
}

int Rng::uniform_int(int lo, int hi) {
    const int span = hi - lo + 1;
    int v = lo + static_cast<int>(uniform01() * span);
    return v > hi ? hi : v;
}

void check_level_weights(const LevelWeights& weights) {
    if (weights.high <= 0 || weights.medium <= 0 || weights.low <= 0) {
        throw Error(ErrorCode::ConfigError, "level weights must be positive");
    }
}

WeightMap default_level_weights() {
    WeightMap weights;
    for (const auto& dim : trait_dimension_names()) {
        weights[dim] = LevelWeights{2.0, 1.0, 2.0};
    }
    weights["emotional_stability"] = LevelWeights{3.0, 1.0, 2.0};
    return weights;
}

TraitLevel sample_level(Rng& rng, const LevelWeights& weights) {
    check_level_weights(weights);
    const double total = weights.high + weights.medium + weights.low;
    const double u = rng.uniform01() * total;
    if (u < weights.high) return TraitLevel::High;
    if (u < weights.high + weights.medium) return TraitLevel::Medium;
    return TraitLevel::Low;
}

TraitVector sample_traits(Rng& rng, const WeightMap& weights) {
    TraitVector v;
    for (const auto& dim : trait_dimension_names()) {
        auto it = weights.find(dim);
        if (it == weights.end()) {
            throw Error(ErrorCode::ConfigError, "no weights for dimension: " + dim);
        }
        set_trait_dimension(v, dim, sample_level(rng, it->second));
    }
    return v;
}

namespace {

std::optional<Persona> parse_persona_reply(const TraitVector& traits,
                                           const std::string& reply) {
    auto obj = extract_json_object(reply);
    if (!obj) return std::nullopt;
    try {
        Persona persona;
        persona.traits = traits;
        persona.description = obj->at("description").get<std::string>();
        const auto& style = obj->at("speaking_style");
        persona.speaking_style.logic = style.at("logic").get<std::string>();
        persona.speaking_style.clarity = style.at("clarity").get<std::string>();
        persona.speaking_style.tone = style.at("tone").get<std::string>();
        persona.interactivity = obj->at("interactivity").get<std::string>();
        if (persona.description.empty() || persona.speaking_style.logic.empty() ||
            persona.speaking_style.clarity.empty() ||
            persona.speaking_style.tone.empty() || persona.interactivity.empty()) {
            return std::nullopt;
        }
        return persona;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

}  // namespace

Persona describe_persona(const TraitVector& traits, ChatBackend& backend,
                         const TemplateStore& templates,
                         const PersonaGenOptions& options) {
    std::map<std::string, std::string> values;
    for (const auto& dim : trait_dimension_names()) {
        values[dim] = trait_level_name(trait_dimension(traits, dim));
    }
    ChatRequest request;
    request.model_id = options.model_id;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.messages = {{MessageRole::User, templates.render("persona_gen", values)}};

    ChatResponse response = backend.complete(request);
    if (auto persona = parse_persona_reply(traits, response.content)) {
        return *persona;
    }
    // One repair pass: echo the malformed reply and restate the shape.
    request.messages.push_back({MessageRole::Assistant, response.content});
    request.messages.push_back(
        {MessageRole::User, templates.get("repair_json")});
    response = backend.complete(request);
    if (auto persona = parse_persona_reply(traits, response.content)) {
        return *persona;
    }
    throw Error(ErrorCode::PersonaParseError,
                "backend reply is not a valid persona description");
}

LegalSense assign_legal_sense(int explicit_level) {
    return make_legal_sense(explicit_level);
}

LegalSense assign_legal_sense(Rng& rng) {
    return make_legal_sense(rng.uniform_int(1, 5));
}

std::vector<DistractorDirective> sample_distractor_plan(Rng& rng) {
    // Stages 1-4 are where information gathering happens, so distractors
    // aimed there have something to hide or blur.
    const int count = rng.uniform_int(1, 2);
    std::vector<DistractorDirective> plan;
    plan.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        DistractorDirective d;
        d.stage_id = rng.uniform_int(1, 4);
        d.kind = rng.uniform_int(0, 1) == 0 ? DistractorKind::MissingDetail
                                            : DistractorKind::Vagueness;
        d.target_hint = d.kind == DistractorKind::MissingDetail
                            ? "omit one detail relevant to this stage until asked again"
                            : "answer this stage vaguely until pressed for specifics";
        plan.push_back(std::move(d));
    }
    return plan;
}

ClientProfile build_client_profile(const LegalElements& elements,
                                   const Persona& persona, const LegalSense& sense,
                                   std::vector<DistractorDirective> distractor_plan) {
    for (const DistractorDirective& d : distractor_plan) {
        if (d.stage_id < 1 || d.stage_id > 7) {
            throw Error(ErrorCode::InvariantViolation,
                        "distractor references invalid stage " +
                            std::to_string(d.stage_id));
        }
    }
    ClientProfile profile;
    profile.personal_info = elements.plaintiff_info;
    profile.case_info = "Claim: " + elements.claim + "\nCase details: " +
                        elements.case_detail + "\nEvidence: " + elements.evidence;
    profile.persona = persona;
    profile.legal_sense = sense;
    profile.distractor_plan = std::move(distractor_plan);
    return profile;
}

LawyerProfile build_lawyer_profile(const LegalElements& elements, Agenda agenda,
                                   std::string complaint_template) {
    if (agenda.stages.empty()) {
        throw Error(ErrorCode::PreconditionViolation, "lawyer agenda must be non-empty");
    }
    if (trim(complaint_template).empty()) {
        throw Error(ErrorCode::PreconditionViolation,
                    "complaint template must be non-empty");
    }
    LawyerProfile profile;
    profile.case_analysis = elements.case_analysis;
    profile.legal_provisions = elements.legal_provisions;
    profile.agenda = std::move(agenda);
    profile.complaint_template = std::move(complaint_template);
    return profile;
}

SupervisorContext supervisor_context(const ClientProfile& client,
                                     const LawyerProfile& lawyer,
                                     const AgendaStage& current_stage, Role speaker) {
    SupervisorContext ctx;
    ctx.speaker = speaker;
    ctx.stage = current_stage;
    ctx.personal_info = client.personal_info;
    ctx.case_info = client.case_info;
    ctx.persona = client.persona;
    ctx.legal_sense = client.legal_sense;
    if (speaker == Role::Lawyer) {
        ctx.lawyer = SupervisorContext::LawyerMounts{
            lawyer.case_analysis, lawyer.legal_provisions, lawyer.agenda};
    }
    for (const DistractorDirective& d : client.distractor_plan) {
        if (d.stage_id == current_stage.id) ctx.active_distractors.push_back(d);
    }
    return ctx;
}

}  // namespace maser
