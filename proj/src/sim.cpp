#include "maser/sim.hpp"

#include "maser/error.hpp"
#include "maser/json_util.hpp"
#include "maser/strings.hpp"

#include <algorithm>

namespace maser {

namespace {

constexpr const char* kCorrectSentinel = "correct";

std::string distractors_text(const std::vector<DistractorDirective>& directives) {
    if (directives.empty()) return "(none)";
    std::vector<std::string> lines;
    for (const DistractorDirective& d : directives) {
        lines.push_back(std::string("- stage ") + std::to_string(d.stage_id) + " " +
                        distractor_kind_name(d.kind) + ": " + d.target_hint);
    }
    return join(lines, "\n");
}

std::string agenda_text(const Agenda& agenda) {
    std::vector<std::string> lines;
    for (const AgendaStage& stage : agenda.stages) {
        lines.push_back(std::to_string(stage.id) + ". " + stage.title + ": " +
                        stage.instruction);
    }
    return join(lines, "\n");
}

std::string persona_text(const Persona& persona) {
    std::string out = persona.description;
    out += "\nSpeaking style - logic: " + persona.speaking_style.logic;
    out += "; clarity: " + persona.speaking_style.clarity;
    out += "; tone: " + persona.speaking_style.tone;
    out += "\nInteractivity: " + persona.interactivity;
    return out;
}

ChatRequest make_request(const std::string& model_id, std::vector<ChatMessage> messages,
                         const SimConfig& config) {
    ChatRequest request;
    request.model_id = model_id;
    request.messages = std::move(messages);
    request.temperature = config.temperature;
    request.max_tokens = config.max_tokens;
    request.seed = static_cast<std::int64_t>(config.seed);
    return request;
}

}  // namespace

void check_sim_config(const SimConfig& config) {
    if (config.max_turns < 1) {
        throw Error(ErrorCode::ConfigError, "max_turns must be >= 1");
    }
    if (config.end_marker.empty()) {
        throw Error(ErrorCode::ConfigError, "end_marker must be non-empty");
    }
}

// ---------------------------------------------------------------------------
// Stage tracking
// ---------------------------------------------------------------------------

StageRules StageRules::defaults() {
    StageRules rules;
    rules.rules = {
        {1,
         {"name", "gender", "date of birth", "birth", "ethnicity", "address", "姓名",
          "性别", "出生", "民族", "住址"},
         2},
        {2, {"defendant", "被告", "对方"}, 1},
        {3, {"happen", "detail", "时间", "地点", "经过", "纠纷"}, 1},
        {4, {"claim", "outcome", "compensation", "seek", "诉讼请求", "赔偿", "要求"}, 1},
        {5, {"litigation cost", "court fee", "诉讼费"}, 1},
        {6, {"evidence", "contract", "receipt", "证据", "合同", "收据"}, 1},
        {7, {"adverse", "unfavorable", "不利", "其他"}, 1},
    };
    return rules;
}

StageRules StageRules::from_json(const nlohmann::json& j) {
    StageRules rules;
    for (const auto& item : j.at("stages")) {
        StageRule rule;
        rule.stage_id = item.at("id").get<int>();
        rule.keywords = item.at("keywords").get<std::vector<std::string>>();
        rule.min_hits = item.value("min_hits", 1);
        rules.rules.push_back(std::move(rule));
    }
    return rules;
}

const StageRule* StageRules::find(int stage_id) const {
    for (const StageRule& rule : rules) {
        if (rule.stage_id == stage_id) return &rule;
    }
    return nullptr;
}

bool StageRules::matches(int stage_id, const std::string& lawyer_text) const {
    const StageRule* rule = find(stage_id);
    if (!rule) return false;
    const std::string haystack = to_lower_ascii(lawyer_text);
    int hits = 0;
    for (const std::string& keyword : rule->keywords) {
        if (contains(haystack, to_lower_ascii(keyword))) {
            if (++hits >= rule->min_hits) return true;
        }
    }
    return false;
}

AgendaStage detect_stage(const std::vector<Round>& history, const Agenda& agenda,
                         const StageRules& rules) {
    if (agenda.stages.empty()) {
        throw Error(ErrorCode::PreconditionViolation, "agenda is empty");
    }
    size_t cursor = 0;
    for (const Round& round : history) {
        if (cursor + 1 >= agenda.stages.size()) break;
        if (rules.matches(agenda.stages[cursor].id, round.lawyer.committed)) {
            ++cursor;
        }
    }
    return agenda.stages[cursor];
}

AgendaStage detect_stage_llm(const std::vector<Round>& history, const Agenda& agenda,
                             const AgendaStage& last_known, ChatBackend& backend,
                             const TemplateStore& templates, const SimConfig& config) {
    if (agenda.stages.empty()) {
        throw Error(ErrorCode::PreconditionViolation, "agenda is empty");
    }
    try {
        ChatRequest request = make_request(
            config.supervisor_model,
            {{MessageRole::User,
              templates.render("stage_detect", {{"agenda", agenda_text(agenda)},
                                                {"history", history_text(history)}})}},
            config);
        const ChatResponse response = backend.complete(request);
        auto obj = extract_json_object(response.content);
        if (obj && obj->contains("stage") && obj->at("stage").is_number_integer()) {
            const int id = obj->at("stage").get<int>();
            for (const AgendaStage& stage : agenda.stages) {
                if (stage.id == id) return stage;
            }
        }
    } catch (const Error&) {
        // fall through to last known stage
    }
    return last_known;
}

// ---------------------------------------------------------------------------
// Loop operations
// ---------------------------------------------------------------------------

bool detect_end(const std::string& lawyer_committed_text, const std::string& end_marker) {
    return contains(collapse_inline_ws(lawyer_committed_text),
                    collapse_inline_ws(end_marker));
}

std::string history_text(const std::vector<Round>& rounds) {
    std::vector<std::string> lines;
    for (const Round& round : rounds) {
        lines.push_back("Client: " + round.client.committed);
        lines.push_back("Lawyer: " + round.lawyer.committed);
    }
    return join(lines, "\n");
}

std::vector<ChatMessage> client_messages(const ClientProfile& profile,
                                         const std::vector<Round>& rounds,
                                         const TemplateStore& templates) {
    const bool corporate =
        contains(profile.personal_info, "公司") || contains(profile.personal_info, "Co.");
    const std::string system = templates.render(
        corporate ? "client_corporate" : "client_personal",
        {
            {"personal_info", profile.personal_info},
            {"case_info", profile.case_info},
            {"persona", persona_text(profile.persona)},
            {"legal_sense", profile.legal_sense.description},
            {"distractors", distractors_text(profile.distractor_plan)},
        });
    std::vector<ChatMessage> messages{{MessageRole::System, system}};
    messages.push_back({MessageRole::User, templates.get("client_open")});
    for (const Round& round : rounds) {
        messages.push_back({MessageRole::Assistant, round.client.committed});
        messages.push_back({MessageRole::User, round.lawyer.committed});
    }
    return messages;
}

std::vector<ChatMessage> lawyer_messages(const LawyerProfile& profile,
                                         const std::vector<Round>& rounds,
                                         const std::string& pending_client_text,
                                         const SimConfig& config,
                                         const TemplateStore& templates) {
    const std::string system =
        templates.render("lawyer_system", {
                                              {"agenda", agenda_text(profile.agenda)},
                                              {"case_analysis", profile.case_analysis},
                                              {"legal_provisions", profile.legal_provisions},
                                              {"end_marker", config.end_marker},
                                          });
    std::vector<ChatMessage> messages{{MessageRole::System, system}};
    for (const Round& round : rounds) {
        messages.push_back({MessageRole::User, round.client.committed});
        messages.push_back({MessageRole::Assistant, round.lawyer.committed});
    }
    messages.push_back({MessageRole::User, pending_client_text});
    return messages;
}

namespace {

std::optional<Verdict> parse_verdict_reply(const std::string& reply) {
    if (auto obj = extract_json_object(reply)) {
        try {
            if (obj->contains("verdict")) {
                const std::string verdict =
                    to_lower_ascii(trim(obj->at("verdict").get<std::string>()));
                if (verdict == kCorrectSentinel) {
                    return Verdict{VerdictStatus::Correct, ""};
                }
                if (verdict == "revise") {
                    const std::string suggestions =
                        trim(obj->value("suggestions", ""));
                    if (!suggestions.empty()) {
                        return Verdict{VerdictStatus::Revise, suggestions};
                    }
                }
                return std::nullopt;
            }
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;
        }
    }
    // Fallback: a bare correct-sentinel on the first non-empty line.
    for (const std::string& raw_line : split(reply, '\n')) {
        std::string line = to_lower_ascii(trim(raw_line));
        while (!line.empty() && (line.back() == '.' || line.back() == '!')) {
            line.pop_back();
        }
        if (line.empty()) continue;
        if (line == kCorrectSentinel) return Verdict{VerdictStatus::Correct, ""};
        break;
    }
    return std::nullopt;
}

std::string supervisor_system(const SupervisorContext& context,
                              const TemplateStore& templates) {
    if (context.speaker == Role::Client) {
        return templates.render("supervisor_client",
                                {
                                    {"personal_info", context.personal_info},
                                    {"case_info", context.case_info},
                                    {"persona", persona_text(context.persona)},
                                    {"legal_sense", context.legal_sense.description},
                                });
    }
    const auto& mounts = *context.lawyer;
    return templates.render("supervisor_lawyer",
                            {
                                {"personal_info", context.personal_info},
                                {"case_info", context.case_info},
                                {"persona", persona_text(context.persona)},
                                {"legal_sense", context.legal_sense.description},
                                {"case_analysis", mounts.case_analysis},
                                {"legal_provisions", mounts.legal_provisions},
                                {"agenda", agenda_text(mounts.agenda)},
                            });
}

}  // namespace

Verdict supervise(const std::string& utterance_draft, const SupervisorContext& context,
                  const std::string& rendered_history, ChatBackend& backend,
                  const SimConfig& config, const TemplateStore& templates) {
    if (context.speaker == Role::Lawyer && !context.lawyer) {
        throw Error(ErrorCode::PreconditionViolation,
                    "lawyer review requires lawyer mounts in the supervisor context");
    }
    const std::string review = templates.render(
        "supervisor_review",
        {
            {"speaker", role_name(context.speaker)},
            {"stage_title", context.stage.title},
            {"stage_instruction", context.stage.instruction},
            {"history", rendered_history.empty() ? "(start of conversation)"
                                                 : rendered_history},
            {"draft", utterance_draft},
            {"distractors", distractors_text(context.active_distractors)},
        });
    ChatRequest request =
        make_request(config.supervisor_model,
                     {{MessageRole::System, supervisor_system(context, templates)},
                      {MessageRole::User, review}},
                     config);
    ChatResponse response = backend.complete(request);
    if (auto verdict = parse_verdict_reply(response.content)) return *verdict;

    request.messages.push_back({MessageRole::Assistant, response.content});
    request.messages.push_back({MessageRole::User, templates.get("repair_verdict")});
    response = backend.complete(request);
    if (auto verdict = parse_verdict_reply(response.content)) return *verdict;
    throw Error(ErrorCode::VerdictParseError,
                "supervisor reply unparseable after repair retry");
}

std::string revise(const std::string& draft, const Verdict& verdict,
                   std::vector<ChatMessage> role_context, ChatBackend& backend,
                   const std::string& model_id, const SimConfig& config,
                   const TemplateStore& templates) {
    if (verdict.status != VerdictStatus::Revise) {
        throw Error(ErrorCode::PreconditionViolation,
                    "revise requires a Revise verdict");
    }
    role_context.push_back({MessageRole::Assistant, draft});
    role_context.push_back(
        {MessageRole::User,
         templates.render("revise", {{"suggestions", verdict.suggestions}})});
    return backend.complete(make_request(model_id, std::move(role_context), config))
        .content;
}

std::string draft_complaint(const std::vector<Round>& history,
                            const std::string& complaint_template, ChatBackend& backend,
                            const SimConfig& config, const TemplateStore& templates) {
    if (history.empty()) {
        throw Error(ErrorCode::PreconditionViolation,
                    "complaint drafting requires at least one completed round");
    }
    const std::string prompt = templates.render(
        "complaint_draft", {{"history", history_text(history)},
                            {"complaint_template", complaint_template}});
    ChatRequest request = make_request(config.lawyer_model,
                                       {{MessageRole::User, prompt}}, config);
    return backend.complete(request).content;
}

// ---------------------------------------------------------------------------
// The simulation loop
// ---------------------------------------------------------------------------

Transcript run_simulation(const ClientProfile& client_profile,
                          const LawyerProfile& lawyer_profile,
                          const SimBackends& backends, const SimConfig& config,
                          const TemplateStore& templates, const StageRules& stage_rules,
                          const std::string& case_id) {
    check_sim_config(config);
    if (!backends.client || !backends.lawyer || !backends.supervisor) {
        throw Error(ErrorCode::ConfigError, "simulation requires all three backends");
    }

    Transcript transcript;
    transcript.case_id = case_id;
    transcript.ended_by = EndReason::MaxTurns;
    AgendaStage stage = lawyer_profile.agenda.stages.front();

    for (int turn = 1; turn <= config.max_turns; ++turn) {
        stage = config.stage_detect == StageDetectMode::Rules
                    ? detect_stage(transcript.rounds, lawyer_profile.agenda, stage_rules)
                    : detect_stage_llm(transcript.rounds, lawyer_profile.agenda, stage,
                                       *backends.supervisor, templates, config);
        Round round;

        // Client speaks, is reviewed, and optionally revises once.
        {
            std::vector<ChatMessage> context =
                client_messages(client_profile, transcript.rounds, templates);
            const std::string draft =
                backends.client->complete(make_request(config.client_model, context, config))
                    .content;
            SupervisorContext ctx =
                supervisor_context(client_profile, lawyer_profile, stage, Role::Client);
            ctx.history = &transcript.rounds;
            const Verdict verdict = supervise(draft, ctx, history_text(transcript.rounds),
                                              *backends.supervisor, config, templates);
            round.client.role = Role::Client;
            round.client.draft = draft;
            round.client.verdict = verdict;
            round.client.committed =
                verdict.status == VerdictStatus::Correct
                    ? draft
                    : revise(draft, verdict, std::move(context), *backends.client,
                             config.client_model, config, templates);
        }

        // Lawyer answers the committed client text.
        {
            std::vector<ChatMessage> context =
                lawyer_messages(lawyer_profile, transcript.rounds, round.client.committed,
                                config, templates);
            const std::string draft =
                backends.lawyer->complete(make_request(config.lawyer_model, context, config))
                    .content;
            round.lawyer.role = Role::Lawyer;
            round.lawyer.draft = draft;
            if (config.supervise == SuperviseMode::BothRoles) {
                SupervisorContext ctx = supervisor_context(client_profile, lawyer_profile,
                                                           stage, Role::Lawyer);
                ctx.history = &transcript.rounds;
                const std::string pending =
                    history_text(transcript.rounds).empty()
                        ? "Client: " + round.client.committed
                        : history_text(transcript.rounds) +
                              "\nClient: " + round.client.committed;
                const Verdict verdict = supervise(draft, ctx, pending,
                                                  *backends.supervisor, config, templates);
                round.lawyer.verdict = verdict;
                round.lawyer.committed =
                    verdict.status == VerdictStatus::Correct
                        ? draft
                        : revise(draft, verdict, std::move(context), *backends.lawyer,
                                 config.lawyer_model, config, templates);
            } else {
                round.lawyer.verdict = Verdict{VerdictStatus::Correct, ""};
                round.lawyer.committed = draft;
            }
        }

        transcript.rounds.push_back(std::move(round));
        if (detect_end(transcript.rounds.back().lawyer.committed, config.end_marker)) {
            transcript.ended_by = EndReason::EndMarker;
            break;
        }
    }

    transcript.complaint =
        draft_complaint(transcript.rounds, lawyer_profile.complaint_template,
                        *backends.lawyer, config, templates);
    check_transcript(transcript, config.max_turns);
    return transcript;
}

}  // namespace maser
