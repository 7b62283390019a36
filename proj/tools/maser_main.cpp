// maser: multi-agent legal-scenario simulation, dataset export and evaluation.
//
// Subcommands: extract, persona, simulate, export, evaluate, report,
// replay-verify, pipeline. See README.md for the run-config format.

#include "maser/casebook.hpp"
#include "maser/config.hpp"
#include "maser/dataset.hpp"
#include "maser/error.hpp"
#include "maser/hash.hpp"
#include "maser/jsonl.hpp"
#include "maser/mile.hpp"
#include "maser/parallel.hpp"
#include "maser/pipeline.hpp"
#include "maser/sim.hpp"
#include "maser/strings.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace maser;

namespace {

struct GlobalFlags {
    std::string config_path;
    int max_turns = -1;
    long long seed = -1;
    int workers = -1;
    std::string template_dir;
    std::string cache_dir;
    std::string base_url;
};

RunConfig resolve_config(const GlobalFlags& flags) {
    RunConfig config;
    if (!flags.config_path.empty()) {
        config = load_config(flags.config_path);
    } else {
        // No file: environment still applies.
        if (const char* v = std::getenv("MASER_API_KEY")) config.api_key = v;
        if (const char* v = std::getenv("MASER_BASE_URL")) config.base_url = v;
        if (const char* v = std::getenv("MASER_CACHE_DIR")) config.cache_dir = v;
    }
    // CLI flags override file and environment.
    if (flags.max_turns >= 0) config.max_turns = flags.max_turns;
    if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.workers >= 0) config.workers = flags.workers;
    if (!flags.template_dir.empty()) config.template_dir = flags.template_dir;
    if (!flags.cache_dir.empty()) config.cache_dir = flags.cache_dir;
    if (!flags.base_url.empty()) config.base_url = flags.base_url;
    validate_config(config);
    return config;
}

void add_global_flags(CLI::App* cmd, GlobalFlags& flags) {
    cmd->add_option("--config", flags.config_path, "run-config file");
    cmd->add_option("--max-turns", flags.max_turns, "override max dialogue rounds");
    cmd->add_option("--seed", flags.seed, "override the run seed");
    cmd->add_option("--workers", flags.workers, "override the worker count");
    cmd->add_option("--templates", flags.template_dir, "override the template directory");
    cmd->add_option("--cache-dir", flags.cache_dir, "override the response cache directory");
    cmd->add_option("--base-url", flags.base_url, "override the backend base URL");
}

int compare_trees(const std::string& dir_a, const std::string& dir_b,
                  const std::vector<std::string>& relative_files) {
    int mismatches = 0;
    for (const std::string& rel : relative_files) {
        const std::string a = (fs::path(dir_a) / rel).string();
        const std::string b = (fs::path(dir_b) / rel).string();
        if (!fs::exists(a) || !fs::exists(b)) {
            std::cout << "[MISSING] " << rel << "\n";
            ++mismatches;
            continue;
        }
        if (file_hash_hex(a) != file_hash_hex(b)) {
            std::cout << "[DIFF]    " << rel << "\n";
            ++mismatches;
        } else {
            std::cout << "[OK]      " << rel << "\n";
        }
    }
    return mismatches;
}

std::vector<std::string> work_dir_artifacts(const std::string& work_dir) {
    std::vector<std::string> rel;
    for (const char* name : {"elements.jsonl", "profiles.jsonl", "synthlaw.jsonl",
                             "scenarios.jsonl", "report.jsonl", "report.txt"}) {
        if (fs::exists(fs::path(work_dir) / name)) rel.push_back(name);
    }
    for (const char* sub : {"transcripts", "eval_transcripts"}) {
        const fs::path dir = fs::path(work_dir) / sub;
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

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maser: legal-scenario simulation engine and evaluation harness"};
    app.require_subcommand(1);

    // ---- extract ----
    GlobalFlags extract_flags;
    std::string extract_in;
    std::string extract_out;
    std::string extract_model;
    auto* cmd_extract =
        app.add_subcommand("extract", "lift the seven legal elements from judgments");
    cmd_extract->add_option("--in", extract_in, "document dir or corpus file")->required();
    cmd_extract->add_option("--out", extract_out, "output elements JSONL")->required();
    cmd_extract->add_option("--model", extract_model, "extraction model id");
    add_global_flags(cmd_extract, extract_flags);

    // ---- persona ----
    GlobalFlags persona_flags;
    std::string persona_elements;
    std::string persona_out;
    auto* cmd_persona =
        app.add_subcommand("persona", "sample personas and assemble role profiles");
    cmd_persona->add_option("--elements", persona_elements, "elements JSONL")->required();
    cmd_persona->add_option("--out", persona_out, "output profiles JSONL")->required();
    add_global_flags(cmd_persona, persona_flags);

    // ---- simulate ----
    GlobalFlags simulate_flags;
    std::string simulate_profiles;
    std::string simulate_cases;
    std::string simulate_out;
    auto* cmd_simulate =
        app.add_subcommand("simulate", "run the supervised dialogue loop per case");
    cmd_simulate->add_option("--profiles", simulate_profiles, "profiles JSONL")->required();
    cmd_simulate->add_option("--cases", simulate_cases,
                             "optional elements JSONL; ids must match the profiles");
    cmd_simulate->add_option("--out", simulate_out, "transcript output dir")->required();
    add_global_flags(cmd_simulate, simulate_flags);

    // ---- export ----
    GlobalFlags export_flags;
    std::string export_transcripts;
    std::string export_out;
    std::string export_system_text;
    auto* cmd_export =
        app.add_subcommand("export", "convert transcripts into masked SFT records");
    cmd_export->add_option("--transcripts", export_transcripts, "transcript dir")->required();
    cmd_export->add_option("--out", export_out, "output JSONL")->required();
    cmd_export->add_option("--system-text", export_system_text,
                           "prepend this system message to every record");
    add_global_flags(cmd_export, export_flags);

    // ---- evaluate ----
    GlobalFlags evaluate_flags;
    std::string evaluate_scenarios;
    std::string evaluate_candidate;
    std::string evaluate_judge;
    std::string evaluate_out;
    bool evaluate_consistency = false;
    auto* cmd_evaluate =
        app.add_subcommand("evaluate", "drive a candidate lawyer through the benchmark");
    cmd_evaluate->add_option("--scenarios", evaluate_scenarios, "scenario JSONL")->required();
    cmd_evaluate->add_option("--candidate", evaluate_candidate, "candidate model id");
    cmd_evaluate->add_option("--judge", evaluate_judge, "judge model id");
    cmd_evaluate->add_option("--out", evaluate_out, "output report JSONL")->required();
    cmd_evaluate->add_flag("--consistency", evaluate_consistency,
                           "also score client behavioral consistency");
    add_global_flags(cmd_evaluate, evaluate_flags);

    // ---- report ----
    std::string report_in;
    std::string report_format = "table";
    auto* cmd_report = app.add_subcommand("report", "summarize an evaluation report");
    cmd_report->add_option("--in", report_in, "report JSONL")->required();
    cmd_report->add_option("--format", report_format, "table or csv");

    // ---- replay-verify ----
    GlobalFlags replay_flags;
    std::string replay_in;
    std::string replay_work;
    std::string replay_stages = "extract,persona,simulate,export,evaluate,report";
    auto* cmd_replay = app.add_subcommand(
        "replay-verify", "re-run a recorded pipeline from cache and compare outputs");
    cmd_replay->add_option("--in", replay_in, "document dir or corpus file")->required();
    cmd_replay->add_option("--work", replay_work, "recorded work dir")->required();
    cmd_replay->add_option("--stages", replay_stages, "comma-separated stages");
    add_global_flags(cmd_replay, replay_flags);

    // ---- pipeline ----
    GlobalFlags pipeline_flags;
    std::string pipeline_in;
    std::string pipeline_work;
    std::string pipeline_stages = "extract,persona,simulate,export,evaluate,report";
    bool pipeline_force = false;
    auto* cmd_pipeline =
        app.add_subcommand("pipeline", "run a sequence of stages with manifests");
    cmd_pipeline->add_option("--in", pipeline_in, "document dir or corpus file");
    cmd_pipeline->add_option("--work", pipeline_work, "work dir")->required();
    cmd_pipeline->add_option("--stages", pipeline_stages, "comma-separated stages");
    cmd_pipeline->add_flag("--force", pipeline_force, "rerun even when inputs match");
    add_global_flags(cmd_pipeline, pipeline_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_extract) {
            RunConfig config = resolve_config(extract_flags);
            if (!extract_model.empty()) config.models["extractor"] = extract_model;
            TemplateStore templates = load_templates(config);
            const auto docs = load_documents(extract_in);
            BackendHandle backend = make_backend(config, "extractor");
            ExtractOptions opts;
            opts.model_id = model_for_role(config, "extractor");
            const auto outcomes =
                extract_corpus(docs, backend.get(), templates, opts, config.workers);
            std::ofstream out(extract_out, std::ios::binary | std::ios::trunc);
            int failures = 0;
            for (size_t i = 0; i < outcomes.size(); ++i) {
                if (!outcomes[i].elements) {
                    ++failures;
                    std::cerr << outcomes[i].doc_id << ": " << outcomes[i].error << "\n";
                    continue;
                }
                nlohmann::json line = *outcomes[i].elements;
                line["case_id"] = outcomes[i].doc_id;
                line["cause_of_action"] = docs[i].cause_of_action;
                out << line.dump() << "\n";
            }
            std::cout << "extracted " << (outcomes.size() - failures) << "/"
                      << outcomes.size() << " documents -> " << extract_out << "\n";
            return failures == 0 ? 0 : 1;
        }

        if (*cmd_persona) {
            RunConfig config = resolve_config(persona_flags);
            // Reuse the pipeline stage against a scratch work dir layout.
            PipelineOptions options;
            options.config = config;
            options.config_path = persona_flags.config_path;
            options.work_dir = fs::path(persona_out).parent_path().empty()
                                   ? "."
                                   : fs::path(persona_out).parent_path().string();
            options.stages = {"persona"};
            options.force = true;
            fs::create_directories(options.work_dir);
            if (!fs::exists(elements_path(options.work_dir)) ||
                !fs::equivalent(persona_elements, elements_path(options.work_dir))) {
                fs::copy_file(persona_elements, elements_path(options.work_dir),
                              fs::copy_options::overwrite_existing);
            }
            run_pipeline(options);
            if (!fs::exists(persona_out) ||
                !fs::equivalent(profiles_path(options.work_dir), persona_out)) {
                fs::copy_file(profiles_path(options.work_dir), persona_out,
                              fs::copy_options::overwrite_existing);
            }
            std::cout << "profiles -> " << persona_out << "\n";
            return 0;
        }

        if (*cmd_simulate) {
            RunConfig config = resolve_config(simulate_flags);
            TemplateStore templates = load_templates(config);
            const auto profiles = read_jsonl<CaseProfiles>(simulate_profiles);
            if (!simulate_cases.empty()) {
                const auto wanted = read_jsonl<nlohmann::json>(simulate_cases);
                if (wanted.size() != profiles.size()) {
                    throw Error(ErrorCode::ConfigError,
                                "--cases and --profiles line counts differ");
                }
            }
            BackendHandle client = make_backend(config, "client");
            BackendHandle lawyer = make_backend(config, "lawyer");
            BackendHandle supervisor = make_backend(config, "supervisor");
            const SimConfig sim = sim_config_from(config);
            const StageRules rules = StageRules::defaults();
            std::vector<Transcript> transcripts(profiles.size());
            parallel_for(profiles.size(), config.workers, [&](size_t i) {
                SimBackends backends{&client.get(), &lawyer.get(), &supervisor.get()};
                transcripts[i] = run_simulation(profiles[i].client, profiles[i].lawyer,
                                                backends, sim, templates, rules,
                                                profiles[i].case_id);
            });
            fs::create_directories(simulate_out);
            nlohmann::json batch{{"schema", "maser.batch.v1"},
                                 {"seed", config.seed},
                                 {"max_turns", config.max_turns},
                                 {"end_marker", config.end_marker},
                                 {"cases", nlohmann::json::array()}};
            for (const Transcript& t : transcripts) {
                const std::string file =
                    (fs::path(simulate_out) / (t.case_id + ".json")).string();
                write_text_file(file, nlohmann::json(t).dump() + "\n");
                batch["cases"].push_back({{"case_id", t.case_id},
                                          {"rounds", t.rounds.size()},
                                          {"file", file},
                                          {"hash", file_hash_hex(file)}});
            }
            write_text_file((fs::path(simulate_out) / "batch_manifest.json").string(),
                            batch.dump(2) + "\n");
            std::cout << "simulated " << transcripts.size() << " cases -> "
                      << simulate_out << "\n";
            return 0;
        }

        if (*cmd_export) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(export_transcripts)) {
                if (entry.is_regular_file() && entry.path().extension() == ".json" &&
                    entry.path().filename() != "batch_manifest.json") {
                    files.push_back(entry.path());
                }
            }
            std::sort(files.begin(), files.end());
            std::vector<SftExample> examples;
            ExportOptions opts;
            if (!export_system_text.empty()) {
                opts.prepend_system = true;
                opts.system_text = export_system_text;
            }
            for (const auto& file : files) {
                const Transcript t =
                    nlohmann::json::parse(read_text_file(file.string())).get<Transcript>();
                examples.push_back(export_sft(t, opts));
            }
            const size_t n = write_sft_jsonl(examples, export_out);
            std::cout << "wrote " << n << " records -> " << export_out << "\n";
            return 0;
        }

        if (*cmd_evaluate) {
            RunConfig config = resolve_config(evaluate_flags);
            if (!evaluate_candidate.empty()) config.models["candidate"] = evaluate_candidate;
            if (!evaluate_judge.empty()) config.models["judge"] = evaluate_judge;
            TemplateStore templates = load_templates(config);
            const auto scenarios = load_scenarios(evaluate_scenarios);

            BackendHandle candidate = make_backend(config, "candidate");
            BackendHandle client = make_backend(config, "eval_client");
            BackendHandle supervisor = make_backend(config, "eval_supervisor");
            BackendHandle judge = make_backend(config, "judge");

            BenchmarkConfig bench;
            bench.sim = sim_config_from(config);
            bench.sim.supervise = SuperviseMode::ClientOnly;
            bench.sim.client_model = model_for_role(config, "eval_client");
            bench.sim.lawyer_model = model_for_role(config, "candidate");
            bench.sim.supervisor_model = model_for_role(config, "eval_supervisor");
            bench.judge.model_id = model_for_role(config, "judge");
            bench.judge.temperature = config.judge_temperature;
            bench.complaint_template = templates.get("complaint_template");
            bench.score_consistency = evaluate_consistency;
            bench.workers = config.workers;

            const auto results =
                run_benchmark(scenarios, candidate.get(), client.get(), supervisor.get(),
                              judge.get(), bench, templates, StageRules::defaults());
            std::vector<EvalReport> reports;
            int failed = 0;
            for (const auto& result : results) {
                reports.push_back(result.report);
                if (!result.report.error.empty()) ++failed;
            }
            write_jsonl(reports, evaluate_out);
            std::cout << "evaluated " << reports.size() << " scenarios (" << failed
                      << " failed) -> " << evaluate_out << "\n";
            return 0;
        }

        if (*cmd_report) {
            const auto reports = read_jsonl<EvalReport>(report_in);
            std::cout << format_summary(summarize_reports(reports), report_format);
            return 0;
        }

        if (*cmd_replay) {
            RunConfig config = resolve_config(replay_flags);
            if (config.cache_dir.empty()) {
                throw Error(ErrorCode::ConfigError,
                            "cache_dir: replay-verify needs the recorded cache");
            }
            // Force every backend onto the replay cache.
            for (auto& [role, spec] : config.backends) {
                spec.type = "replay";
                spec.script.clear();
            }
            for (const char* role : {"extractor", "persona", "client", "lawyer",
                                     "supervisor", "judge", "candidate", "eval_client",
                                     "eval_supervisor"}) {
                if (!config.backends.count(role)) config.backends[role] = {"replay", ""};
            }
            PipelineOptions options;
            options.config = config;
            options.config_path = replay_flags.config_path;
            options.input_path = replay_in;
            options.work_dir = replay_work + ".replay";
            fs::remove_all(options.work_dir);
            for (const std::string& stage : maser::split(replay_stages, ',')) {
                if (!stage.empty()) options.stages.push_back(maser::trim(stage));
            }
            options.force = true;
            run_pipeline(options);
            const int mismatches = compare_trees(replay_work, options.work_dir,
                                                 work_dir_artifacts(replay_work));
            if (mismatches == 0) {
                std::cout << "replay verified: outputs are byte-identical\n";
                return 0;
            }
            std::cout << "replay mismatch in " << mismatches << " artifact(s)\n";
            return 1;
        }

        if (*cmd_pipeline) {
            RunConfig config = resolve_config(pipeline_flags);
            PipelineOptions options;
            options.config = config;
            options.config_path = pipeline_flags.config_path;
            options.input_path = pipeline_in;
            options.work_dir = pipeline_work;
            for (const std::string& stage : maser::split(pipeline_stages, ',')) {
                if (!stage.empty()) options.stages.push_back(maser::trim(stage));
            }
            options.force = pipeline_force;
            const PipelineManifest manifest = run_pipeline(options);
            for (const auto& [name, record] : manifest.stages) {
                std::cout << (record.skipped ? "[skip] " : "[run]  ") << name << " ("
                          << record.elapsed_ms << " ms)\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
