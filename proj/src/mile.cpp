#include "maser/mile.hpp"

#include "maser/error.hpp"
#include "maser/json_util.hpp"
#include "maser/parallel.hpp"
#include "maser/strings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace maser {

// ---------------------------------------------------------------------------
// Windows
// ---------------------------------------------------------------------------

std::vector<Window> window_transcript(const Transcript& transcript) {
    if (transcript.rounds.empty()) {
        throw Error(ErrorCode::PreconditionViolation,
                    "windowing requires at least one round");
    }
    std::vector<Window> windows;
    for (size_t i = 0; i < transcript.rounds.size(); i += 2) {
        Window w;
        w.index = static_cast<int>(windows.size());
        w.rounds.push_back(transcript.rounds[i]);
        if (i + 1 < transcript.rounds.size()) {
            w.rounds.push_back(transcript.rounds[i + 1]);
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

// ---------------------------------------------------------------------------
// JSON bindings
// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const WindowScore& v) {
    j = nlohmann::json{{"index", v.index},
                       {"INT", v.interactivity},
                       {"PROF", v.professionality},
                       {"LOGI", v.logicality},
                       {"clamped", v.clamped}};
}

void from_json(const nlohmann::json& j, WindowScore& v) {
    j.at("index").get_to(v.index);
    j.at("INT").get_to(v.interactivity);
    j.at("PROF").get_to(v.professionality);
    j.at("LOGI").get_to(v.logicality);
    v.clamped = j.value("clamped", false);
}

void to_json(nlohmann::json& j, const InteractionScores& v) {
    j = nlohmann::json{{"windows", v.windows},
                       {"unscored_windows", v.unscored_windows},
                       {"INT", v.interactivity},
                       {"PROF", v.professionality},
                       {"LOGI", v.logicality},
                       {"AVE", v.average}};
}

void from_json(const nlohmann::json& j, InteractionScores& v) {
    j.at("windows").get_to(v.windows);
    v.unscored_windows = j.value("unscored_windows", 0);
    j.at("INT").get_to(v.interactivity);
    j.at("PROF").get_to(v.professionality);
    j.at("LOGI").get_to(v.logicality);
    j.at("AVE").get_to(v.average);
}

namespace {

void put_optional(nlohmann::json& j, const char* key, const std::optional<double>& v) {
    if (v) {
        j[key] = *v;
    } else {
        j[key] = nullptr;
    }
}

std::optional<double> get_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const GoalScores& v) {
    j = nlohmann::json::object();
    put_optional(j, "CLI", v.client_info);
    put_optional(j, "DEF", v.defendant_info);
    put_optional(j, "FR", v.facts_reasons);
    put_optional(j, "CLA", v.claims);
    put_optional(j, "EVID", v.evidence);
    put_optional(j, "STA", v.standardability);
    put_optional(j, "PROF", v.professionalism);
    j["AVE"] = v.average;
    j["excluded"] = v.excluded;
    j["flags"] = v.flags;
}

void from_json(const nlohmann::json& j, GoalScores& v) {
    v.client_info = get_optional(j, "CLI");
    v.defendant_info = get_optional(j, "DEF");
    v.facts_reasons = get_optional(j, "FR");
    v.claims = get_optional(j, "CLA");
    v.evidence = get_optional(j, "EVID");
    v.standardability = get_optional(j, "STA");
    v.professionalism = get_optional(j, "PROF");
    j.at("AVE").get_to(v.average);
    v.excluded = j.value("excluded", 0);
    v.flags = j.value("flags", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const EvalReport& v) {
    j = nlohmann::json{{"schema", EvalReport::kSchema},
                       {"scenario_id", v.scenario_id},
                       {"legal_attribute", v.legal_attribute},
                       {"rounds", v.rounds},
                       {"error", v.error}};
    if (v.interaction) j["interaction"] = *v.interaction;
    if (v.goal) j["goal"] = *v.goal;
    if (v.consistency) j["consistency"] = *v.consistency;
}

void from_json(const nlohmann::json& j, EvalReport& v) {
    if (j.contains("schema") && j.at("schema").get<std::string>() != EvalReport::kSchema) {
        throw Error(ErrorCode::SchemaError,
                    "expected schema " + std::string(EvalReport::kSchema));
    }
    j.at("scenario_id").get_to(v.scenario_id);
    v.legal_attribute = j.value("legal_attribute", "");
    v.rounds = j.value("rounds", 0);
    v.error = j.value("error", "");
    if (j.contains("interaction")) v.interaction = j.at("interaction").get<InteractionScores>();
    if (j.contains("goal")) v.goal = j.at("goal").get<GoalScores>();
    if (j.contains("consistency")) v.consistency = j.at("consistency").get<double>();
}

// ---------------------------------------------------------------------------
// Judging
// ---------------------------------------------------------------------------

namespace {

std::string window_text(const Window& window) {
    std::vector<std::string> lines;
    for (const Round& round : window.rounds) {
        lines.push_back("Client: " + round.client.committed);
        lines.push_back("Lawyer: " + round.lawyer.committed);
    }
    return join(lines, "\n");
}

ChatRequest judge_request(const std::string& prompt, const JudgeOptions& options) {
    ChatRequest request;
    request.model_id = options.model_id;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.messages = {{MessageRole::User, prompt}};
    return request;
}

// Clamps into [1,10]; sets `clamped` when the raw value was outside.
int clamp_score(int raw, bool& clamped) {
    if (raw < 1) {
        clamped = true;
        return 1;
    }
    if (raw > 10) {
        clamped = true;
        return 10;
    }
    return raw;
}

std::optional<int> read_int_field(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) return static_cast<int>(std::lround(v.get<double>()));
    return std::nullopt;
}

// Judge replies carry {"score": n}; returns nullopt when unparseable.
std::optional<int> parse_score_reply(const std::string& reply) {
    auto obj = extract_json_object(reply);
    if (!obj) return std::nullopt;
    return read_int_field(*obj, "score");
}

// One judged metric: prompt, parse, single repair retry.
int judged_score(const std::string& prompt, ChatBackend& judge,
                 const TemplateStore& templates, const JudgeOptions& options,
                 bool& clamped) {
    ChatRequest request = judge_request(prompt, options);
    ChatResponse response = judge.complete(request);
    auto score = parse_score_reply(response.content);
    if (!score) {
        request.messages.push_back({MessageRole::Assistant, response.content});
        request.messages.push_back({MessageRole::User, templates.get("repair_score")});
        response = judge.complete(request);
        score = parse_score_reply(response.content);
        if (!score) {
            throw Error(ErrorCode::JudgeParseError, "judge reply has no score");
        }
    }
    return clamp_score(*score, clamped);
}

}  // namespace

WindowScore judge_interaction(const Window& window, ChatBackend& judge,
                              const TemplateStore& templates,
                              const JudgeOptions& options) {
    ChatRequest request = judge_request(
        templates.render("judge_interaction", {{"window", window_text(window)}}),
        options);
    ChatResponse response = judge.complete(request);
    auto obj = extract_json_object(response.content);
    auto parse = [&](const nlohmann::json& o)
        -> std::optional<std::tuple<int, int, int>> {
        auto i = read_int_field(o, "INT");
        auto p = read_int_field(o, "PROF");
        auto l = read_int_field(o, "LOGI");
        if (!i || !p || !l) return std::nullopt;
        return std::make_tuple(*i, *p, *l);
    };
    std::optional<std::tuple<int, int, int>> values;
    if (obj) values = parse(*obj);
    if (!values) {
        request.messages.push_back({MessageRole::Assistant, response.content});
        request.messages.push_back({MessageRole::User, templates.get("repair_interaction")});
        response = judge.complete(request);
        obj = extract_json_object(response.content);
        if (obj) values = parse(*obj);
        if (!values) {
            throw Error(ErrorCode::JudgeParseError,
                        "interaction judge reply unparseable after repair retry");
        }
    }
    WindowScore score;
    score.index = window.index;
    score.interactivity = clamp_score(std::get<0>(*values), score.clamped);
    score.professionality = clamp_score(std::get<1>(*values), score.clamped);
    score.logicality = clamp_score(std::get<2>(*values), score.clamped);
    return score;
}

InteractionScores aggregate_interaction(const std::vector<WindowScore>& windows,
                                        int unscored_windows) {
    if (windows.empty()) {
        throw Error(ErrorCode::PreconditionViolation,
                    "aggregation requires at least one scored window");
    }
    InteractionScores scores;
    scores.windows = windows;
    scores.unscored_windows = unscored_windows;
    double sum_int = 0;
    double sum_prof = 0;
    double sum_logi = 0;
    for (const WindowScore& w : windows) {
        sum_int += w.interactivity;
        sum_prof += w.professionality;
        sum_logi += w.logicality;
    }
    const double n = static_cast<double>(windows.size());
    scores.interactivity = sum_int / n * 10.0;
    scores.professionality = sum_prof / n * 10.0;
    scores.logicality = sum_logi / n * 10.0;
    scores.average =
        (scores.interactivity + scores.professionality + scores.logicality) / 3.0;
    return scores;
}

// ---------------------------------------------------------------------------
// Complaint parsing and goal evaluation
// ---------------------------------------------------------------------------

namespace {

struct HeadingRule {
    const char* key;
    std::vector<std::string> prefixes;  // matched case-insensitively on normalized lines
};

const std::vector<HeadingRule>& heading_rules() {
    static const std::vector<HeadingRule> rules = {
        {"facts_reasons", {"facts and reasons", "facts & reasons", "facts", "事实与理由", "事实和理由"}},
        {"plaintiff", {"plaintiff", "原告"}},
        {"defendant", {"defendant", "被告"}},
        {"claims", {"claims", "claim", "诉讼请求"}},
        {"evidence", {"evidence", "证据"}},
    };
    return rules;
}

// Returns the section key when the line opens a section, plus any inline
// content after the heading separator.
std::optional<std::pair<std::string, std::string>> match_heading(const std::string& line) {
    const std::string normalized = normalize_field(line);
    const std::string lower = to_lower_ascii(normalized);
    for (const HeadingRule& rule : heading_rules()) {
        for (const std::string& prefix : rule.prefixes) {
            const std::string p = to_lower_ascii(prefix);
            if (lower.compare(0, p.size(), p) != 0) continue;
            std::string rest = trim(normalized.substr(p.size()));
            if (!rest.empty() && rest[0] == ':') {
                rest = trim(rest.substr(1));
            } else if (!rest.empty()) {
                continue;  // heading word embedded in a longer word
            }
            return std::make_pair(std::string(rule.key), rest);
        }
    }
    return std::nullopt;
}

}  // namespace

ComplaintSections parse_complaint(const std::string& complaint_text) {
    ComplaintSections out;
    std::string current_key;
    for (const std::string& line : split(complaint_text, '\n')) {
        if (auto heading = match_heading(line)) {
            current_key = heading->first;
            std::string& section = out.sections[current_key];
            if (!heading->second.empty()) {
                if (!section.empty()) section += "\n";
                section += heading->second;
            } else if (!out.sections.count(current_key)) {
                section = "";
            }
            continue;
        }
        if (!current_key.empty()) {
            std::string& section = out.sections[current_key];
            if (!section.empty()) section += "\n";
            section += line;
        }
    }
    if (out.sections.empty()) {
        throw Error(ErrorCode::ComplaintParseError,
                    "no recognizable section headings in complaint");
    }
    return out;
}

double match_party_fields(const std::string& section_text,
                          const std::map<std::string, std::string>& truth_fields) {
    if (truth_fields.empty()) {
        throw Error(ErrorCode::PreconditionViolation, "ground truth fields are empty");
    }
    std::map<std::string, std::string> parsed;
    try {
        parsed = parse_party(section_text).fields;
    } catch (const Error&) {
        parsed.clear();  // fall back to containment below
    }
    const std::string normalized_section = normalize_field(section_text);
    size_t matches = 0;
    for (const auto& [key, truth_value] : truth_fields) {
        const std::string want = normalize_field(truth_value);
        auto it = parsed.find(key);
        if (it != parsed.end()) {
            if (normalize_field(it->second) == want) ++matches;
        } else if (!want.empty() && contains(normalized_section, want)) {
            // Field not isolated by the parser but present verbatim.
            ++matches;
        }
    }
    return static_cast<double>(matches) / static_cast<double>(truth_fields.size()) * 100.0;
}

namespace {

void judge_goal_field(std::optional<double>& slot, const char* flag_name,
                      const std::string& prompt, ChatBackend& judge,
                      const TemplateStore& templates, const JudgeOptions& options,
                      GoalScores& scores) {
    try {
        bool clamped = false;
        slot = judged_score(prompt, judge, templates, options, clamped) * 10.0;
        if (clamped) {
            scores.flags.push_back(std::string(flag_name) + ": score clamped");
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::JudgeParseError) throw;
        slot.reset();
        ++scores.excluded;
        scores.flags.push_back(std::string(flag_name) + ": unscored (" + e.what() + ")");
    }
}

}  // namespace

GoalScores eval_goal_local(const std::string& complaint_text,
                           const GroundTruthComplaint& ground_truth,
                           ChatBackend& judge, const TemplateStore& templates,
                           const JudgeOptions& options) {
    GoalScores scores;
    std::optional<ComplaintSections> sections;
    try {
        sections = parse_complaint(complaint_text);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ComplaintParseError) throw;
        scores.client_info = 0.0;
        scores.defendant_info = 0.0;
        scores.facts_reasons = 0.0;
        scores.claims = 0.0;
        scores.evidence = 0.0;
        scores.flags.push_back("complaint unparseable; local fields scored 0");
        finalize_goal_average(scores);
        return scores;
    }

    auto section_or_empty = [&](const char* key) -> std::string {
        auto it = sections->sections.find(key);
        return it == sections->sections.end() ? std::string() : it->second;
    };

    // CLI and DEF never touch a judge.
    scores.client_info =
        match_party_fields(section_or_empty("plaintiff"), ground_truth.client_fields);
    scores.defendant_info =
        match_party_fields(section_or_empty("defendant"), ground_truth.defendant_fields);

    judge_goal_field(scores.facts_reasons, "FR",
                     templates.render("judge_local",
                                      {{"section_name", "facts and reasons"},
                                       {"generated", section_or_empty("facts_reasons")},
                                       {"reference", ground_truth.facts_reasons}}),
                     judge, templates, options, scores);
    judge_goal_field(scores.claims, "CLA",
                     templates.render("judge_local",
                                      {{"section_name", "claims"},
                                       {"generated", section_or_empty("claims")},
                                       {"reference", ground_truth.claims}}),
                     judge, templates, options, scores);
    judge_goal_field(scores.evidence, "EVID",
                     templates.render("judge_local",
                                      {{"section_name", "evidence"},
                                       {"generated", section_or_empty("evidence")},
                                       {"reference", ground_truth.evidence}}),
                     judge, templates, options, scores);
    finalize_goal_average(scores);
    return scores;
}

void eval_goal_global(const std::string& complaint_text,
                      const std::string& complaint_template, ChatBackend& judge,
                      const TemplateStore& templates, const JudgeOptions& options,
                      GoalScores& scores) {
    judge_goal_field(scores.standardability, "STA",
                     templates.render("judge_sta",
                                      {{"complaint", complaint_text},
                                       {"template", complaint_template}}),
                     judge, templates, options, scores);
    judge_goal_field(scores.professionalism, "PROF",
                     templates.render("judge_prof", {{"complaint", complaint_text}}),
                     judge, templates, options, scores);
    finalize_goal_average(scores);
}

void finalize_goal_average(GoalScores& scores) {
    double sum = 0.0;
    int present = 0;
    for (const auto* field :
         {&scores.client_info, &scores.defendant_info, &scores.facts_reasons,
          &scores.claims, &scores.evidence, &scores.standardability,
          &scores.professionalism}) {
        if (field->has_value()) {
            sum += field->value();
            ++present;
        }
    }
    scores.average = present ? sum / present : 0.0;
}

double total_performance(double goal_ave, double interaction_ave) {
    if (goal_ave < 0 || goal_ave > 100 || interaction_ave < 0 || interaction_ave > 100) {
        throw Error(ErrorCode::PreconditionViolation,
                    "averages must lie in [0,100]");
    }
    return (goal_ave + interaction_ave) / 2.0;
}

double judge_consistency(const Transcript& transcript, const ClientProfile& profile,
                         ChatBackend& judge, const TemplateStore& templates,
                         const JudgeOptions& options) {
    std::string persona = profile.persona.description;
    persona += "\nSpeaking style - logic: " + profile.persona.speaking_style.logic +
               "; clarity: " + profile.persona.speaking_style.clarity +
               "; tone: " + profile.persona.speaking_style.tone;
    persona += "\nInteractivity: " + profile.persona.interactivity;
    persona += "\nLegal sense: " + profile.legal_sense.description;
    const std::string prompt =
        templates.render("judge_consistency",
                         {{"client_profile", persona},
                          {"history", history_text(transcript.rounds)}});
    bool clamped = false;
    return judged_score(prompt, judge, templates, options, clamped) * 10.0;
}

// ---------------------------------------------------------------------------
// Benchmark driver
// ---------------------------------------------------------------------------

std::vector<ScenarioResult> run_benchmark(const std::vector<MileScenario>& scenarios,
                                          ChatBackend& candidate, ChatBackend& client,
                                          ChatBackend& supervisor, ChatBackend& judge,
                                          const BenchmarkConfig& config,
                                          const TemplateStore& templates,
                                          const StageRules& stage_rules) {
    if (config.sim.supervise != SuperviseMode::ClientOnly) {
        throw Error(ErrorCode::ConfigError,
                    "the benchmark supervises the client only; attaching the "
                    "supervisor to the lawyer is a configuration error");
    }
    check_sim_config(config.sim);
    if (trim(config.complaint_template).empty()) {
        throw Error(ErrorCode::ConfigError, "benchmark requires a complaint template");
    }

    LawyerProfile lawyer_profile;
    lawyer_profile.agenda = config.agenda.stages.empty() ? default_agenda() : config.agenda;
    lawyer_profile.complaint_template = config.complaint_template;

    std::vector<ScenarioResult> results(scenarios.size());
    parallel_for(scenarios.size(), config.workers, [&](size_t i) {
        const MileScenario& scenario = scenarios[i];
        ScenarioResult& result = results[i];
        result.scenario_id = scenario.scenario_id;
        result.report.scenario_id = scenario.scenario_id;
        result.report.legal_attribute = scenario.legal_attribute;
        try {
            SimBackends backends{&client, &candidate, &supervisor};
            result.transcript =
                run_simulation(scenario.client_profile, lawyer_profile, backends,
                               config.sim, templates, stage_rules, scenario.scenario_id);
            result.report.rounds = static_cast<int>(result.transcript.rounds.size());

            // Interaction: judge each window; unscored windows are excluded
            // from the means and counted.
            std::vector<WindowScore> scored;
            int unscored = 0;
            for (const Window& window : window_transcript(result.transcript)) {
                try {
                    scored.push_back(
                        judge_interaction(window, judge, templates, config.judge));
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::JudgeParseError) throw;
                    ++unscored;
                }
            }
            if (!scored.empty()) {
                result.report.interaction = aggregate_interaction(scored, unscored);
            }

            GoalScores goal = eval_goal_local(result.transcript.complaint,
                                              scenario.ground_truth, judge, templates,
                                              config.judge);
            eval_goal_global(result.transcript.complaint, config.complaint_template,
                             judge, templates, config.judge, goal);
            result.report.goal = std::move(goal);

            if (config.score_consistency) {
                try {
                    result.report.consistency =
                        judge_consistency(result.transcript, scenario.client_profile,
                                          judge, templates, config.judge);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::JudgeParseError) throw;
                    result.report.goal->flags.push_back("consistency: unscored");
                }
            }
        } catch (const std::exception& e) {
            result.report.error = e.what();
        }
    });
    return results;
}

// ---------------------------------------------------------------------------
// Report summarization
// ---------------------------------------------------------------------------

namespace {

double mean_of(const std::vector<double>& values) {
    double sum = 0;
    for (double v : values) sum += v;
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
}

}  // namespace

ReportSummary summarize_reports(const std::vector<EvalReport>& reports) {
    ReportSummary summary;
    summary.scenarios = static_cast<int>(reports.size());
    std::map<std::string, std::vector<double>> goal;
    std::map<std::string, std::vector<double>> interaction;
    for (const EvalReport& report : reports) {
        if (!report.error.empty()) {
            ++summary.failed;
            continue;
        }
        if (report.goal) {
            const GoalScores& g = *report.goal;
            auto push = [&](const char* key, const std::optional<double>& v) {
                if (v) goal[key].push_back(*v);
            };
            push("CLI", g.client_info);
            push("DEF", g.defendant_info);
            push("F&R", g.facts_reasons);
            push("CLA", g.claims);
            push("EVID", g.evidence);
            push("STA", g.standardability);
            push("PROF", g.professionalism);
            goal["AVE"].push_back(g.average);
        }
        if (report.interaction) {
            interaction["INT"].push_back(report.interaction->interactivity);
            interaction["PROF"].push_back(report.interaction->professionality);
            interaction["LOGI"].push_back(report.interaction->logicality);
            interaction["AVE"].push_back(report.interaction->average);
        }
    }
    for (const auto& [key, values] : goal) summary.goal_columns[key] = mean_of(values);
    for (const auto& [key, values] : interaction) {
        summary.interaction_columns[key] = mean_of(values);
    }
    if (summary.goal_columns.count("AVE") && summary.interaction_columns.count("AVE")) {
        summary.total = total_performance(summary.goal_columns.at("AVE"),
                                          summary.interaction_columns.at("AVE"));
    }
    return summary;
}

std::string format_summary(const ReportSummary& summary, const std::string& format) {
    static const std::vector<std::string> kGoalColumns = {
        "CLI", "DEF", "F&R", "CLA", "EVID", "STA", "PROF", "AVE"};
    static const std::vector<std::string> kInteractionColumns = {"INT", "PROF", "LOGI",
                                                                 "AVE"};
    auto value = [](const std::map<std::string, double>& columns, const std::string& key) {
        auto it = columns.find(key);
        return it == columns.end() ? std::string("-") : fmt2(it->second);
    };

    std::string out;
    if (format == "csv") {
        out += "section," + join(kGoalColumns, ",") + ",N\n";
        out += "goal";
        for (const auto& c : kGoalColumns) out += "," + value(summary.goal_columns, c);
        out += "," + std::to_string(summary.scenarios - summary.failed) + "\n";
        out += "section," + join(kInteractionColumns, ",") + ",N\n";
        out += "interaction";
        for (const auto& c : kInteractionColumns) {
            out += "," + value(summary.interaction_columns, c);
        }
        out += "," + std::to_string(summary.scenarios - summary.failed) + "\n";
        if (summary.total) out += "total," + fmt2(*summary.total) + "\n";
        return out;
    }
    if (format != "table") {
        throw Error(ErrorCode::ConfigError, "unknown report format: " + format);
    }
    out += "Goal evaluation (N=" + std::to_string(summary.scenarios - summary.failed);
    if (summary.failed) out += ", failed=" + std::to_string(summary.failed);
    out += ")\n";
    out += "  " + join(kGoalColumns, "\t") + "\n  ";
    for (size_t i = 0; i < kGoalColumns.size(); ++i) {
        if (i) out += "\t";
        out += value(summary.goal_columns, kGoalColumns[i]);
    }
    out += "\n";
    out += "Interaction evaluation\n";
    out += "  " + join(kInteractionColumns, "\t") + "\n  ";
    for (size_t i = 0; i < kInteractionColumns.size(); ++i) {
        if (i) out += "\t";
        out += value(summary.interaction_columns, kInteractionColumns[i]);
    }
    out += "\n";
    if (summary.total) {
        out += "Total performance: " + fmt2(*summary.total) + "\n";
    }
    return out;
}

}  // namespace maser
