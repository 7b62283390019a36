// Acceptance suite: runs every acceptance criterion and prints one line per
// criterion. Exit code 0 iff all pass.
//
// --write-golden regenerates tests/golden/algorithm1_transcript.json from the
// scripted scenario of criterion 1 (maintenance only).

#include "maser/casebook.hpp"
#include "maser/config.hpp"
#include "maser/dataset.hpp"
#include "maser/error.hpp"
#include "maser/hash.hpp"
#include "maser/jsonl.hpp"
#include "maser/mile.hpp"
#include "maser/persona.hpp"
#include "maser/pipeline.hpp"
#include "maser/sim.hpp"
#include "maser/strings.hpp"
#include "maser/templates.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <thread>

using namespace maser;
namespace fs = std::filesystem;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw CheckFailure(message);
}

void require_close(double got, double want, double tolerance, const std::string& what) {
    if (std::abs(got - want) > tolerance) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: got %.4f, want %.4f (tol %.4f)",
                      what.c_str(), got, want, tolerance);
        throw CheckFailure(buf);
    }
}

const TemplateStore& templates() {
    static const TemplateStore store = TemplateStore::load_dir(MASER_TEMPLATES_DIR);
    return store;
}

std::string scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("maser_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

LegalElements fixture_elements() {
    LegalElements e;
    e.plaintiff_info = "李某，女，1990年5月12日出生，汉族，住上海市静安区南京西路100号";
    e.defendant_info = "北京宏达商贸有限公司，住所地北京市朝阳区建国路88号，法定代表人王强";
    e.claim = "判令被告支付货款人民币50000元及利息。";
    e.case_detail = "双方签订买卖合同后被告未付清货款。";
    e.evidence = "买卖合同一份、送货单三张。";
    e.case_analysis = "被告未按约付款构成违约。";
    e.legal_provisions = "《中华人民共和国民法典》第五百七十七条。";
    return e;
}

ClientProfile fixture_client_profile() {
    Persona persona;
    persona.traits.extraversion = TraitLevel::High;
    persona.description = "A direct shop owner who wants the dispute settled quickly.";
    persona.speaking_style = {"ordered", "concrete", "impatient"};
    persona.interactivity = "asks pointed questions";
    return build_client_profile(fixture_elements(), persona, make_legal_sense(2), {});
}

LawyerProfile fixture_lawyer_profile() {
    return build_lawyer_profile(fixture_elements(), default_agenda(),
                                templates().get("complaint_template"));
}

SimConfig fixture_sim_config(int max_turns = 15) {
    SimConfig c;
    c.max_turns = max_turns;
    c.client_model = "client-m";
    c.lawyer_model = "lawyer-m";
    c.supervisor_model = "supervisor-m";
    return c;
}

const char* kCorrect = R"({"verdict": "correct"})";

std::string revise_json(const std::string& suggestions) {
    return nlohmann::json{{"verdict", "revise"}, {"suggestions", suggestions}}.dump();
}

std::string score_json(int s) { return nlohmann::json{{"score", s}}.dump(); }

std::string interaction_json(int i, int p, int l) {
    return nlohmann::json{{"INT", i}, {"PROF", p}, {"LOGI", l}}.dump();
}

// The scripted three-round scenario behind criterion 1.
Transcript golden_scenario_run() {
    auto client = ScriptedBackend::sequence({
        "Hello, a buyer owes me 50000 yuan for delivered goods.",
        "My name is 李某.",
        "I am 李某, female, born on 1990年5月12日, 汉族, living at 上海市静安区南京西路100号.",
        "The buyer is 北京宏达商贸有限公司 at 北京市朝阳区建国路88号, represented by 王强.",
    });
    auto lawyer = ScriptedBackend::sequence({
        "I can help. May I have your name, gender, date of birth, ethnicity and address?",
        "Thank you. Who is the defendant?",
        "Understood, I have everything I need. Inquiry ends",
        "CIVIL COMPLAINT\n\nPlaintiff: 李某\nDefendant: 北京宏达商贸有限公司\n\n"
        "Claims:\n判令被告支付货款人民币50000元及利息。\n",
    });
    auto supervisor = ScriptedBackend::sequence({
        kCorrect,                                                      // r1 client
        kCorrect,                                                      // r1 lawyer
        revise_json("State your full identity, not just the name."),   // r2 client
        kCorrect,                                                      // r2 lawyer
        kCorrect,                                                      // r3 client
        kCorrect,                                                      // r3 lawyer
    });
    SimBackends backends{client.get(), lawyer.get(), supervisor.get()};
    return run_simulation(fixture_client_profile(), fixture_lawyer_profile(), backends,
                          fixture_sim_config(), templates(), StageRules::defaults(),
                          "golden-case");
}

std::string golden_path() {
    return std::string(MASER_GOLDEN_DIR) + "/algorithm1_transcript.json";
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

void criterion_1_golden_replay() {
    const auto start = std::chrono::steady_clock::now();
    const Transcript t = golden_scenario_run();
    const std::string serialized = nlohmann::json(t).dump() + "\n";
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    require(t.rounds.size() == 3, "expected a three-round transcript");
    require(t.ended_by == EndReason::EndMarker, "expected end-marker termination");
    require(t.rounds[1].client.verdict.status == VerdictStatus::Revise,
            "round-2 client utterance must be revised");
    const std::string golden = read_text_file(golden_path());
    require(serialized == golden, "transcript differs from the checked-in golden file");
    require(elapsed < 1.0, "golden scenario took " + std::to_string(elapsed) + " s");
}

void criterion_2_termination() {
    std::mt19937 rng(424242);
    const std::string marker = "Inquiry ends";
    for (int run = 0; run < 200; ++run) {
        const int m = 1 + static_cast<int>(rng() % 15);
        const bool place_marker = rng() % 2 == 0;
        const int end_round = place_marker ? 1 + static_cast<int>(rng() % m) : 0;
        const int rounds = place_marker ? end_round : m;

        std::vector<std::string> client_lines, lawyer_lines, verdicts;
        for (int r = 1; r <= rounds; ++r) {
            client_lines.push_back("client words " + std::to_string(r));
            std::string lawyer_line = "lawyer words " + std::to_string(r);
            if (place_marker && r == end_round) lawyer_line += " " + marker;
            lawyer_lines.push_back(lawyer_line);
            verdicts.push_back(kCorrect);
            verdicts.push_back(kCorrect);
        }
        lawyer_lines.push_back("complaint body " + std::to_string(run));
        auto client = ScriptedBackend::sequence(client_lines);
        auto lawyer = ScriptedBackend::sequence(lawyer_lines);
        auto supervisor = ScriptedBackend::sequence(verdicts);
        SimBackends backends{client.get(), lawyer.get(), supervisor.get()};

        const Transcript t = run_simulation(fixture_client_profile(),
                                            fixture_lawyer_profile(), backends,
                                            fixture_sim_config(m), templates(),
                                            StageRules::defaults(), "term-case");

        require(static_cast<int>(t.rounds.size()) <= m, "rounds exceeded max turns");
        int marker_count = 0;
        for (const Round& r : t.rounds) {
            if (detect_end(r.lawyer.committed, marker)) ++marker_count;
        }
        if (t.ended_by == EndReason::EndMarker) {
            require(marker_count == 1, "end-marker must appear in exactly one "
                                       "committed lawyer utterance");
            require(static_cast<int>(t.rounds.size()) == end_round,
                    "ended early but not at the marker round");
        } else {
            require(marker_count == 0, "max-turns run must contain no end marker");
            require(static_cast<int>(t.rounds.size()) == m,
                    "max-turns run must hold exactly m rounds");
        }
        require(!t.complaint.empty(), "complaint must always be drafted");
    }
}

void criterion_3_verdict_conformance() {
    std::mt19937 rng(31415);
    for (int run = 0; run < 200; ++run) {
        const int rounds = 1 + static_cast<int>(rng() % 5);
        std::vector<std::string> client_lines, lawyer_lines, verdicts;
        int client_revisions = 0;
        int lawyer_revisions = 0;
        std::vector<bool> client_revised, lawyer_revised;
        for (int r = 1; r <= rounds; ++r) {
            client_lines.push_back("c draft " + std::to_string(r));
            const bool revise_client = rng() % 3 == 0;
            client_revised.push_back(revise_client);
            verdicts.push_back(revise_client
                                   ? revise_json("client fix " + std::to_string(r))
                                   : kCorrect);
            if (revise_client) {
                client_lines.push_back("c revised " + std::to_string(r));
                ++client_revisions;
            }
            std::string lawyer_line = "l draft " + std::to_string(r);
            if (r == rounds) lawyer_line += " Inquiry ends";
            lawyer_lines.push_back(lawyer_line);
            const bool revise_lawyer = rng() % 3 == 0;
            lawyer_revised.push_back(revise_lawyer);
            verdicts.push_back(revise_lawyer
                                   ? revise_json("lawyer fix " + std::to_string(r))
                                   : kCorrect);
            if (revise_lawyer) {
                // revision keeps the marker so termination is unaffected
                lawyer_lines.push_back("l revised " + std::to_string(r) +
                                       (r == rounds ? " Inquiry ends" : ""));
                ++lawyer_revisions;
            }
        }
        lawyer_lines.push_back("complaint");
        auto client = ScriptedBackend::sequence(client_lines);
        auto lawyer = ScriptedBackend::sequence(lawyer_lines);
        auto supervisor = ScriptedBackend::sequence(verdicts);
        SimBackends backends{client.get(), lawyer.get(), supervisor.get()};

        const Transcript t = run_simulation(fixture_client_profile(),
                                            fixture_lawyer_profile(), backends,
                                            fixture_sim_config(rounds), templates(),
                                            StageRules::defaults(), "verdict-case");

        require(t.rounds.size() == static_cast<size_t>(rounds), "unexpected round count");
        for (int r = 0; r < rounds; ++r) {
            const Utterance& cu = t.rounds[r].client;
            const Utterance& lu = t.rounds[r].lawyer;
            if (cu.verdict.status == VerdictStatus::Correct) {
                require(cu.committed == cu.draft,
                        "correct client verdict must commit the draft");
            } else {
                require(cu.verdict.status == VerdictStatus::Revise &&
                            !cu.verdict.suggestions.empty(),
                        "revise verdict must carry suggestions");
            }
            require(cu.verdict.status == (client_revised[r] ? VerdictStatus::Revise
                                                            : VerdictStatus::Correct),
                    "client verdict recorded does not match the script");
            require(lu.verdict.status == (lawyer_revised[r] ? VerdictStatus::Revise
                                                            : VerdictStatus::Correct),
                    "lawyer verdict recorded does not match the script");
            if (lu.verdict.status == VerdictStatus::Correct) {
                require(lu.committed == lu.draft,
                        "correct lawyer verdict must commit the draft");
            }
        }
        // Call-count instrumentation: exactly one supervise per utterance,
        // at most one revise per utterance, one complaint call.
        require(supervisor->calls() == static_cast<size_t>(2 * rounds),
                "supervisor must review each utterance exactly once");
        require(client->calls() == static_cast<size_t>(rounds + client_revisions),
                "client calls must equal drafts plus revisions");
        require(lawyer->calls() == static_cast<size_t>(rounds + lawyer_revisions + 1),
                "lawyer calls must equal drafts plus revisions plus the complaint");
    }
}

void criterion_4_persona_distribution() {
    const WeightMap weights = default_level_weights();
    const int n = 10000;
    std::map<std::string, std::map<TraitLevel, int>> counts;
    Rng rng(917);
    for (int i = 0; i < n; ++i) {
        const TraitVector v = sample_traits(rng, weights);
        for (const auto& dim : trait_dimension_names()) {
            counts[dim][trait_dimension(v, dim)]++;
        }
    }
    for (const auto& dim : trait_dimension_names()) {
        const double high = counts[dim][TraitLevel::High] / double(n);
        const double medium = counts[dim][TraitLevel::Medium] / double(n);
        const double low = counts[dim][TraitLevel::Low] / double(n);
        if (dim != "emotional_stability") {
            require_close(high, 0.4, 0.02, dim + " high frequency");
            require_close(medium, 0.2, 0.02, dim + " medium frequency");
            require_close(low, 0.4, 0.02, dim + " low frequency");
        } else {
            require(high > 0.4, "emotional stability must skew high (got " +
                                    std::to_string(high) + ")");
        }
        // Chi-square goodness of fit vs configured weights, df=2, alpha=0.01.
        const LevelWeights& w = weights.at(dim);
        const double total = w.high + w.medium + w.low;
        const double expected[3] = {n * w.high / total, n * w.medium / total,
                                    n * w.low / total};
        const double observed[3] = {double(counts[dim][TraitLevel::High]),
                                    double(counts[dim][TraitLevel::Medium]),
                                    double(counts[dim][TraitLevel::Low])};
        double chi2 = 0;
        for (int k = 0; k < 3; ++k) {
            const double d = observed[k] - expected[k];
            chi2 += d * d / expected[k];
        }
        require(chi2 < 9.210340, dim + " chi-square " + std::to_string(chi2) +
                                     " exceeds the 0.01 critical value 9.21");
    }
}

void criterion_5_sft_invariants() {
    std::mt19937 rng(5150);
    for (int iter = 0; iter < 200; ++iter) {
        const int rounds = 1 + static_cast<int>(rng() % 10);
        Transcript t;
        t.case_id = "sft-" + std::to_string(iter);
        for (int r = 0; r < rounds; ++r) {
            Round round;
            round.client = {Role::Client, "c" + std::to_string(rng() % 1000), {}, ""};
            round.client.committed = round.client.draft;
            round.lawyer = {Role::Lawyer, "l" + std::to_string(rng() % 1000), {}, ""};
            round.lawyer.committed = round.lawyer.draft;
            t.rounds.push_back(std::move(round));
        }
        t.complaint = "complaint " + std::to_string(rng() % 1000);

        const SftExample ex = export_sft(t);
        require(ex.messages.size() == static_cast<size_t>(2 * rounds + 1),
                "message count must be 2R+1");
        for (size_t i = 0; i < ex.messages.size(); ++i) {
            require(ex.train_mask[i] == (ex.messages[i].role == SftRole::Lawyer),
                    "mask must select exactly the lawyer messages");
        }
        const nlohmann::json j = ex;
        require(j.get<SftExample>() == ex, "serialize -> parse must round-trip");
    }
    const SftExample two = export_sft([] {
        Transcript t;
        t.case_id = "two";
        for (int r = 0; r < 2; ++r) {
            Round round;
            round.client = {Role::Client, "c", {}, "c"};
            round.lawyer = {Role::Lawyer, "l", {}, "l"};
            t.rounds.push_back(round);
        }
        t.complaint = "y";
        return t;
    }());
    require(two.train_mask == std::vector<bool>{false, true, false, true, true},
            "two-round mask must be [F,T,F,T,T]");
}

void criterion_6_interaction_aggregation() {
    // Stub judge: per-window INT=[8,7,9], PROF=[7,7,7], LOGI=[9,8,7].
    auto judge = ScriptedBackend::sequence({interaction_json(8, 7, 9),
                                            interaction_json(7, 7, 8),
                                            interaction_json(9, 7, 7)});
    const Transcript t = [] {
        Transcript t;
        t.case_id = "agg";
        for (int r = 0; r < 5; ++r) {
            Round round;
            round.client = {Role::Client, "c" + std::to_string(r), {},
                            "c" + std::to_string(r)};
            round.lawyer = {Role::Lawyer, "l" + std::to_string(r), {},
                            "l" + std::to_string(r)};
            t.rounds.push_back(round);
        }
        t.complaint = "y";
        return t;
    }();
    const std::vector<Window> windows = window_transcript(t);
    require(windows.size() == 3, "R=5 must yield 3 windows");
    require(windows[0].rounds.size() == 2 && windows[1].rounds.size() == 2 &&
                windows[2].rounds.size() == 1,
            "R=5 window sizes must be [2,2,1]");

    JudgeOptions options;
    options.model_id = "judge-m";
    std::vector<WindowScore> scored;
    for (const Window& w : windows) {
        scored.push_back(judge_interaction(w, *judge, templates(), options));
    }
    const InteractionScores s = aggregate_interaction(scored, 0);
    // Hand computation: INT (8+7+9)/3*10 = 80.00; PROF (7+7+7)/3*10 = 70.00;
    // LOGI (9+8+7)/3*10 = 80.00; AVE (80+70+80)/3 = 76.67.
    require_close(s.interactivity, 80.00, 0.01, "INT aggregate");
    require_close(s.professionality, 70.00, 0.01, "PROF aggregate");
    require_close(s.logicality, 80.00, 0.01, "LOGI aggregate");
    require_close(s.average, 76.67, 0.01, "interaction AVE");
}

void criterion_7_goal_determinism() {
    GroundTruthComplaint gt;
    gt.client_fields = {{"name", "李某"},
                        {"gender", "女"},
                        {"birthdate", "1990年5月12日"},
                        {"ethnicity", "汉族"},
                        {"address", "上海市静安区南京西路100号"}};
    gt.defendant_fields = {{"name", "北京宏达商贸有限公司"},
                           {"address", "北京市朝阳区建国路88号"},
                           {"representative", "王强"}};
    gt.facts_reasons = "双方签订买卖合同后被告未付清货款。";
    gt.claims = "判令被告支付货款人民币50000元及利息。";
    gt.evidence = "买卖合同一份、送货单三张。";

    // 4 of 5 client fields match (birthdate altered), 3 of 3 defendant fields.
    const std::string complaint =
        "CIVIL COMPLAINT\n\n"
        "Plaintiff: name: 李某; gender: 女; birthdate: 1991年1月1日; ethnicity: 汉族; "
        "address: 上海市静安区南京西路100号\n"
        "Defendant: name: 北京宏达商贸有限公司; address: 北京市朝阳区建国路88号; "
        "representative: 王强\n\n"
        "Claims:\n判令被告支付货款。\n\n"
        "Facts and Reasons:\n合同纠纷。\n\n"
        "Evidence:\n合同等。\n";

    auto judge = ScriptedBackend::sequence({score_json(6), score_json(7), score_json(5),
                                            score_json(9), score_json(8)});
    JudgeOptions options;
    options.model_id = "judge-m";

    GoalScores scores = eval_goal_local(complaint, gt, *judge, templates(), options);
    const size_t judge_calls_after_local = judge->calls();
    eval_goal_global(complaint, templates().get("complaint_template"), *judge,
                     templates(), options, scores);

    require_close(*scores.client_info, 80.00, 0.01, "CLI");
    require_close(*scores.defendant_info, 100.00, 0.01, "DEF");
    require_close(*scores.facts_reasons, 60.00, 0.01, "F&R");
    require_close(*scores.claims, 70.00, 0.01, "CLA");
    require_close(*scores.evidence, 50.00, 0.01, "EVID");
    require_close(*scores.standardability, 90.00, 0.01, "STA");
    require_close(*scores.professionalism, 80.00, 0.01, "PROF");

    // Call-count instrumentation: CLI and DEF consumed zero judge calls; the
    // five judged metrics consumed exactly one each.
    require(judge_calls_after_local == 3, "local evaluation must use 3 judge calls");
    require(judge->calls() == 5, "global evaluation must add 2 judge calls");

    // AVE = mean of the seven fields. Hand computation:
    // (80 + 100 + 60 + 70 + 50 + 90 + 80) / 7 = 530 / 7 = 75.7143.
    require_close(scores.average, 530.0 / 7.0, 0.01, "goal AVE (mean of seven)");
    std::cout << "       note: criterion 7 asserts AVE = mean of the seven = 75.71; "
                 "the criterion's literal constant 77.14 does not equal the mean of "
                 "its own stated field values (530/7 = 75.71)\n";
}

void criterion_8_total_performance() {
    require_close(total_performance(73.71, 78.97), 76.34, 0.01, "total performance");
    require_close(total_performance(0, 0), 0.0, 1e-9, "zero case");
    require_close(total_performance(100, 50), 75.0, 1e-9, "mixed case");
}

// Serves the chat-completions protocol from per-model response sequences.
class LiveShim {
public:
    explicit LiveShim(std::map<std::string, std::vector<std::string>> scripts)
        : scripts_(std::move(scripts)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            std::lock_guard<std::mutex> lock(mutex_);
            const nlohmann::json body = nlohmann::json::parse(req.body);
            const std::string model = body.at("model").get<std::string>();
            auto it = scripts_.find(model);
            size_t& cursor = cursors_[model];
            if (it == scripts_.end() || cursor >= it->second.size()) {
                res.status = 500;
                res.set_content("script exhausted for " + model, "text/plain");
                return;
            }
            const nlohmann::json reply{
                {"choices",
                 {{{"message", {{"role", "assistant"}, {"content", it->second[cursor]}}},
                   {"finish_reason", "stop"}}}},
                {"usage", {{"prompt_tokens", 1}, {"completion_tokens", 1}}}};
            ++cursor;
            res.set_content(reply.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        listener_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~LiveShim() { stop(); }

    void stop() {
        if (listener_.joinable()) {
            server_.stop();
            listener_.join();
        }
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    std::thread listener_;
    int port_ = 0;
    std::mutex mutex_;
    std::map<std::string, std::vector<std::string>> scripts_;
    std::map<std::string, size_t> cursors_;
};

RunConfig pipeline_config() {
    RunConfig c;
    for (const char* role : {"client", "lawyer", "supervisor", "judge", "extractor",
                             "persona", "candidate", "eval_client", "eval_supervisor"}) {
        c.models[role] = std::string("sim-") + role;
    }
    const std::string scripts = std::string(MASER_FIXTURES_DIR) + "/scripts";
    for (const char* role : {"extractor", "persona", "client", "lawyer", "supervisor",
                             "candidate", "eval_client", "eval_supervisor", "judge"}) {
        c.backends[role] = BackendSpec{"scripted", scripts + "/" + role + ".jsonl"};
    }
    c.template_dir = MASER_TEMPLATES_DIR;
    c.seed = 7;
    c.workers = 1;
    return c;
}

std::vector<std::string> comparable_artifacts(const std::string& work) {
    std::vector<std::string> rel = {"elements.jsonl", "profiles.jsonl",
                                    "scenarios.jsonl", "synthlaw.jsonl",
                                    "report.jsonl",   "report.txt"};
    for (const char* sub : {"transcripts", "eval_transcripts"}) {
        const fs::path dir = fs::path(work) / sub;
        if (!fs::is_directory(dir)) continue;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            rel.push_back((fs::path(sub) / file.filename()).string());
        }
    }
    return rel;
}

void criterion_9_replay_determinism() {
    const std::string scripts_dir = std::string(MASER_FIXTURES_DIR) + "/scripts";
    std::map<std::string, std::vector<std::string>> shim_scripts;
    for (const char* role : {"extractor", "persona", "client", "lawyer", "supervisor",
                             "candidate", "eval_client", "eval_supervisor", "judge"}) {
        std::vector<std::string> responses;
        for (const ScriptEntry& entry :
             read_jsonl<ScriptEntry>(scripts_dir + "/" + std::string(role) + ".jsonl")) {
            responses.push_back(entry.response);
        }
        shim_scripts["sim-" + std::string(role)] = std::move(responses);
    }

    LiveShim shim(std::move(shim_scripts));
    const std::string cache = scratch("replay_cache");
    const std::string work_a = scratch("replay_work_a");
    const std::string work_b = scratch("replay_work_b");

    RunConfig recorded = pipeline_config();
    for (auto& [role, spec] : recorded.backends) spec = BackendSpec{"record", ""};
    recorded.base_url = shim.base_url();
    recorded.api_key = "shim-key";
    recorded.cache_dir = cache;

    PipelineOptions options;
    options.config = recorded;
    options.input_path = std::string(MASER_FIXTURES_DIR) + "/cases";
    options.work_dir = work_a;
    options.stages = {"extract", "persona", "simulate", "export", "evaluate", "report"};
    run_pipeline(options);
    shim.stop();  // replay must never touch the network

    RunConfig replayed = pipeline_config();
    for (auto& [role, spec] : replayed.backends) spec = BackendSpec{"replay", ""};
    replayed.cache_dir = cache;
    options.config = replayed;
    options.work_dir = work_b;
    run_pipeline(options);

    const auto artifacts = comparable_artifacts(work_a);
    require(artifacts.size() >= 12, "recorded run produced too few artifacts");
    for (const std::string& rel : artifacts) {
        const std::string a = (fs::path(work_a) / rel).string();
        const std::string b = (fs::path(work_b) / rel).string();
        require(fs::exists(b), "replay run is missing " + rel);
        require(read_text_file(a) == read_text_file(b),
                "artifact differs between record and replay: " + rel);
    }

    // Remove one extract-stage cache entry; the replay must fail loudly.
    bool removed = false;
    for (const auto& entry : fs::directory_iterator(cache)) {
        const nlohmann::json j =
            nlohmann::json::parse(read_text_file(entry.path().string()));
        if (j.at("request").at("model") == "sim-extractor") {
            fs::remove(entry.path());
            removed = true;
            break;
        }
    }
    require(removed, "no extractor cache entry found to remove");
    options.work_dir = scratch("replay_work_c");
    options.force = true;
    try {
        run_pipeline(options);
        throw CheckFailure("replay with a missing cache entry must fail");
    } catch (const Error& e) {
        require(contains(e.what(), "CacheMiss"),
                std::string("expected a loud CacheMiss, got: ") + e.what());
    }
}

void criterion_10_pipeline_fixture() {
    const auto start = std::chrono::steady_clock::now();
    PipelineOptions options;
    options.config = pipeline_config();
    options.input_path = std::string(MASER_FIXTURES_DIR) + "/cases";
    options.work_dir = scratch("pipeline_work");
    options.stages = {"extract", "persona", "simulate", "export", "evaluate", "report"};
    run_pipeline(options);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(elapsed < 10.0, "pipeline took " + std::to_string(elapsed) + " s");

    const auto dataset = read_sft_jsonl(dataset_path(options.work_dir));
    require(dataset.size() == 3, "expected 3 exported training records");
    const auto reports = read_jsonl<EvalReport>(report_path(options.work_dir));
    require(reports.size() == 3, "expected 3 evaluation reports");
    for (const auto& report : reports) {
        require(report.error.empty(), "scenario failed: " + report.error);
    }

    // The goal table header must carry exactly the Table-1 column set.
    const std::string table = read_text_file(report_table_path(options.work_dir));
    const std::vector<std::string> lines = split(table, '\n');
    require(lines.size() > 2, "report table too short");
    const std::vector<std::string> columns = split(trim(lines[1]), '\t');
    const std::vector<std::string> expected = {"CLI", "DEF",  "F&R", "CLA",
                                               "EVID", "STA", "PROF", "AVE"};
    require(columns == expected, "goal table columns are not exactly "
                                 "{CLI, DEF, F&R, CLA, EVID, STA, PROF, AVE}");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::string(argv[1]) == "--write-golden") {
        fs::create_directories(MASER_GOLDEN_DIR);
        write_text_file(golden_path(),
                        nlohmann::json(golden_scenario_run()).dump() + "\n");
        std::cout << "golden transcript written to " << golden_path() << "\n";
        return 0;
    }

    struct Criterion {
        int id;
        const char* name;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "Algorithm-1 golden replay", criterion_1_golden_replay},
        {2, "termination property over 200 randomized runs", criterion_2_termination},
        {3, "verdict/revision conformance with call counts",
         criterion_3_verdict_conformance},
        {4, "persona sampling distribution (10k draws, chi-square)",
         criterion_4_persona_distribution},
        {5, "SFT export invariants over randomized transcripts",
         criterion_5_sft_invariants},
        {6, "interaction aggregation oracle", criterion_6_interaction_aggregation},
        {7, "goal-eval determinism oracle", criterion_7_goal_determinism},
        {8, "total performance", criterion_8_total_performance},
        {9, "record/replay byte determinism with loud cache misses",
         criterion_9_replay_determinism},
        {10, "end-to-end fixture pipeline and report shape",
         criterion_10_pipeline_fixture},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.body();
            const double ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            std::printf("[PASS] %2d. %s (%.0f ms)\n", criterion.id, criterion.name, ms);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("[FAIL] %2d. %s: %s\n", criterion.id, criterion.name, e.what());
        }
    }
    if (failures) {
        std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
    return 0;
}
