#pragma once

#include "maser/domain.hpp"
#include "maser/gateway.hpp"
#include "maser/persona.hpp"
#include "maser/templates.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace maser {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

// Who the supervisor reviews. Generation reviews both speakers; the
// benchmark reviews the client only.
enum class SuperviseMode { BothRoles, ClientOnly };

enum class StageDetectMode { Rules, Llm };

struct SimConfig {
    int max_turns = 15;
    std::string end_marker = "Inquiry ends";
    // One supervise -> revise pass per utterance; revisions are not re-reviewed.
    static constexpr int kRevisionRoundsPerUtterance = 1;
    std::string client_model;
    std::string lawyer_model;
    std::string supervisor_model;
    double temperature = 0.7;
    int max_tokens = 2048;
    std::uint64_t seed = 0;
    SuperviseMode supervise = SuperviseMode::BothRoles;
    StageDetectMode stage_detect = StageDetectMode::Rules;
};

// Throws Error{ConfigError} on max_turns < 1 or an empty end marker.
void check_sim_config(const SimConfig& config);

struct SimBackends {
    ChatBackend* client = nullptr;
    ChatBackend* lawyer = nullptr;
    ChatBackend* supervisor = nullptr;
};

// ---------------------------------------------------------------------------
// Stage tracking
// ---------------------------------------------------------------------------

// Rule-based agenda cursor: the active stage advances once the lawyer's
// committed text addresses enough of the current stage's keyword set. The
// cursor never moves backward.
struct StageRule {
    int stage_id = 0;
    std::vector<std::string> keywords;
    int min_hits = 1;
};

struct StageRules {
    std::vector<StageRule> rules;

    static StageRules defaults();
    static StageRules from_json(const nlohmann::json& j);

    const StageRule* find(int stage_id) const;
    bool matches(int stage_id, const std::string& lawyer_text) const;
};

AgendaStage detect_stage(const std::vector<Round>& history, const Agenda& agenda,
                         const StageRules& rules);

// LLM classifier mode; any malformed reply falls back to `last_known`.
AgendaStage detect_stage_llm(const std::vector<Round>& history, const Agenda& agenda,
                             const AgendaStage& last_known, ChatBackend& backend,
                             const TemplateStore& templates, const SimConfig& config);

// ---------------------------------------------------------------------------
// Loop operations
// ---------------------------------------------------------------------------

// True iff the end marker occurs as a substring after inline-whitespace
// normalization. A marker split across a line break does not match.
bool detect_end(const std::string& lawyer_committed_text, const std::string& end_marker);

// Committed dialogue rendered as "Client: ...\nLawyer: ..." lines.
std::string history_text(const std::vector<Round>& rounds);

// Reviews one draft. The supervisor replies with a structured verdict; a bare
// "correct" first line is accepted as a fallback. One repair retry, then
// Error{VerdictParseError}.
Verdict supervise(const std::string& utterance_draft, const SupervisorContext& context,
                  const std::string& rendered_history, ChatBackend& backend,
                  const SimConfig& config, const TemplateStore& templates);

// One revision pass conditioned on (draft, suggestions); the result is never
// re-reviewed. Requires a Revise verdict.
std::string revise(const std::string& draft, const Verdict& verdict,
                   std::vector<ChatMessage> role_context, ChatBackend& backend,
                   const std::string& model_id, const SimConfig& config,
                   const TemplateStore& templates);

// Drafts the complaint from the full committed history and the template.
std::string draft_complaint(const std::vector<Round>& history,
                            const std::string& complaint_template, ChatBackend& backend,
                            const SimConfig& config, const TemplateStore& templates);

// Prompt assembly, exposed for tests that inspect rendered prompts.
std::vector<ChatMessage> client_messages(const ClientProfile& profile,
                                         const std::vector<Round>& rounds,
                                         const TemplateStore& templates);
std::vector<ChatMessage> lawyer_messages(const LawyerProfile& profile,
                                         const std::vector<Round>& rounds,
                                         const std::string& pending_client_text,
                                         const SimConfig& config,
                                         const TemplateStore& templates);

// ---------------------------------------------------------------------------
// The simulation loop
// ---------------------------------------------------------------------------

// Runs the supervised client/lawyer interaction until the lawyer commits the
// end marker or max_turns rounds complete, then drafts the complaint.
Transcript run_simulation(const ClientProfile& client_profile,
                          const LawyerProfile& lawyer_profile,
                          const SimBackends& backends, const SimConfig& config,
                          const TemplateStore& templates, const StageRules& stage_rules,
                          const std::string& case_id);

}  // namespace maser
