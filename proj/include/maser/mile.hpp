#pragma once

#include "maser/casebook.hpp"
#include "maser/domain.hpp"
#include "maser/gateway.hpp"
#include "maser/sim.hpp"
#include "maser/templates.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maser {

// ---------------------------------------------------------------------------
// Windows
// ---------------------------------------------------------------------------

// Two consecutive rounds form the unit of interaction scoring; the last
// window holds a single round when the round count is odd.
struct Window {
    int index = 0;
    std::vector<Round> rounds;
};

std::vector<Window> window_transcript(const Transcript& transcript);

// ---------------------------------------------------------------------------
// Scores
// ---------------------------------------------------------------------------

struct WindowScore {
    int index = 0;
    int interactivity = 0;   // 1..10 after clamping
    int professionality = 0;
    int logicality = 0;
    bool clamped = false;  // true when any raw judge value fell outside [1,10]
};

struct InteractionScores {
    std::vector<WindowScore> windows;  // scored windows only
    int unscored_windows = 0;
    double interactivity = 0.0;    // window mean x 10, in [0,100]
    double professionality = 0.0;
    double logicality = 0.0;
    double average = 0.0;  // mean of the three aggregates
};

struct GoalScores {
    // Local: client/defendant info are deterministic field matching; facts &
    // reasons, claims and evidence are judged. Global: standardability and
    // professionalism are judged on the whole document.
    std::optional<double> client_info;
    std::optional<double> defendant_info;
    std::optional<double> facts_reasons;
    std::optional<double> claims;
    std::optional<double> evidence;
    std::optional<double> standardability;
    std::optional<double> professionalism;
    double average = 0.0;  // mean over present fields
    int excluded = 0;      // judged fields dropped after unparseable replies
    std::vector<std::string> flags;
};

struct EvalReport {
    std::string scenario_id;
    std::string legal_attribute;
    int rounds = 0;
    std::optional<InteractionScores> interaction;
    std::optional<GoalScores> goal;
    std::optional<double> consistency;
    std::string error;  // non-empty when the scenario failed outright

    static constexpr const char* kSchema = "maser.report.v1";
};

void to_json(nlohmann::json& j, const WindowScore& v);
void from_json(const nlohmann::json& j, WindowScore& v);
void to_json(nlohmann::json& j, const InteractionScores& v);
void from_json(const nlohmann::json& j, InteractionScores& v);
void to_json(nlohmann::json& j, const GoalScores& v);
void from_json(const nlohmann::json& j, GoalScores& v);
void to_json(nlohmann::json& j, const EvalReport& v);
void from_json(const nlohmann::json& j, EvalReport& v);

// ---------------------------------------------------------------------------
// Judging
// ---------------------------------------------------------------------------

struct JudgeOptions {
    std::string model_id;
    double temperature = 0.0;  // judges run as deterministically as the API allows
    int max_tokens = 1024;
};

// Asks the judge for {INT, PROF, LOGI} over one window, 1..10 each.
// Out-of-range integers are clamped and flagged; an unparseable reply gets
// one repair retry and then raises Error{JudgeParseError}.
WindowScore judge_interaction(const Window& window, ChatBackend& judge,
                              const TemplateStore& templates,
                              const JudgeOptions& options);

// Window means scaled to [0,100]. Requires at least one scored window.
InteractionScores aggregate_interaction(const std::vector<WindowScore>& windows,
                                        int unscored_windows);

// ---------------------------------------------------------------------------
// Complaint parsing and goal evaluation
// ---------------------------------------------------------------------------

// Section keys: plaintiff, defendant, claims, facts_reasons, evidence.
struct ComplaintSections {
    std::map<std::string, std::string> sections;
};

// Splits a complaint into sections by heading lines (Chinese and English
// headings are recognized). Throws Error{ComplaintParseError} when no known
// heading is present.
ComplaintSections parse_complaint(const std::string& complaint_text);

// Deterministic field accuracy for one party section: the share of ground
// truth fields whose normalized values match the parsed section, on a 0-100
// scale. Never calls a judge.
double match_party_fields(const std::string& section_text,
                          const std::map<std::string, std::string>& truth_fields);

// CLI/DEF by exact field matching; F&R / CLA / EVID judged against the
// ground truth. An unparseable complaint scores 0 on all five local fields
// with a flag.
GoalScores eval_goal_local(const std::string& complaint_text,
                           const GroundTruthComplaint& ground_truth,
                           ChatBackend& judge, const TemplateStore& templates,
                           const JudgeOptions& options);

// STA (template adherence; the prompt embeds the template text) and PROF
// (legal terminology), judged on the whole document. Merged into `scores`.
void eval_goal_global(const std::string& complaint_text,
                      const std::string& complaint_template, ChatBackend& judge,
                      const TemplateStore& templates, const JudgeOptions& options,
                      GoalScores& scores);

// Recomputes `average` as the mean of present fields.
void finalize_goal_average(GoalScores& scores);

// Arithmetic mean of the goal and interaction averages.
double total_performance(double goal_ave, double interaction_ave);

// Whole-transcript client profile/behavior alignment, 0-100.
double judge_consistency(const Transcript& transcript, const ClientProfile& profile,
                         ChatBackend& judge, const TemplateStore& templates,
                         const JudgeOptions& options);

// ---------------------------------------------------------------------------
// Benchmark driver
// ---------------------------------------------------------------------------

struct BenchmarkConfig {
    SimConfig sim;  // supervise must be ClientOnly: the benchmark reviews the client
    JudgeOptions judge;
    Agenda agenda;  // defaults to default_agenda() when stages are empty
    std::string complaint_template;
    bool score_consistency = false;
    int workers = 1;
};

struct ScenarioResult {
    std::string scenario_id;
    Transcript transcript;
    EvalReport report;
};

// Drives the candidate as the Lawyer inside the simulation loop for every
// scenario, then scores interaction windows and the final complaint.
// Per-scenario failures land in the report's error field; the batch continues.
std::vector<ScenarioResult> run_benchmark(const std::vector<MileScenario>& scenarios,
                                          ChatBackend& candidate, ChatBackend& client,
                                          ChatBackend& supervisor, ChatBackend& judge,
                                          const BenchmarkConfig& config,
                                          const TemplateStore& templates,
                                          const StageRules& stage_rules);

// ---------------------------------------------------------------------------
// Report summarization
// ---------------------------------------------------------------------------

struct ReportSummary {
    int scenarios = 0;
    int failed = 0;
    // Goal columns in table order: CLI, DEF, F&R, CLA, EVID, STA, PROF, AVE.
    std::map<std::string, double> goal_columns;
    // Interaction columns: INT, PROF, LOGI, AVE.
    std::map<std::string, double> interaction_columns;
    std::optional<double> total;  // mean of G-AVE and I-AVE when both exist
};

ReportSummary summarize_reports(const std::vector<EvalReport>& reports);

// "table" or "csv". The goal table's column header set is fixed.
std::string format_summary(const ReportSummary& summary, const std::string& format);

}  // namespace maser
