#include "maser/pipeline.hpp"

#include "maser/dataset.hpp"
#include "maser/error.hpp"
#include "maser/hash.hpp"
#include "maser/jsonl.hpp"
#include "maser/mile.hpp"
#include "maser/parallel.hpp"
#include "maser/sim.hpp"
#include "maser/strings.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>

namespace fs = std::filesystem;

namespace maser {

// ---------------------------------------------------------------------------
// JSON bindings
// ---------------------------------------------------------------------------

void to_json(nlohmann::json& j, const CaseProfiles& v) {
    j = nlohmann::json{
        {"schema", CaseProfiles::kSchema}, {"case_id", v.case_id},
        {"legal_attribute", v.legal_attribute}, {"seed", v.seed},
        {"client", v.client},               {"lawyer", v.lawyer},
    };
}

void from_json(const nlohmann::json& j, CaseProfiles& v) {
    if (j.contains("schema") && j.at("schema").get<std::string>() != CaseProfiles::kSchema) {
        throw Error(ErrorCode::SchemaError,
                    "expected schema " + std::string(CaseProfiles::kSchema));
    }
    j.at("case_id").get_to(v.case_id);
    v.legal_attribute = j.value("legal_attribute", "");
    v.seed = j.value("seed", std::uint64_t{0});
    j.at("client").get_to(v.client);
    j.at("lawyer").get_to(v.lawyer);
}

void to_json(nlohmann::json& j, const StageRecord& v) {
    j = nlohmann::json{{"inputs", v.inputs},       {"outputs", v.outputs},
                       {"params", v.params},       {"elapsed_ms", v.elapsed_ms},
                       {"skipped", v.skipped}};
}

void from_json(const nlohmann::json& j, StageRecord& v) {
    j.at("inputs").get_to(v.inputs);
    j.at("outputs").get_to(v.outputs);
    v.params = j.value("params", nlohmann::json::object());
    v.elapsed_ms = j.value("elapsed_ms", 0L);
    v.skipped = j.value("skipped", false);
}

void to_json(nlohmann::json& j, const PipelineManifest& v) {
    j = nlohmann::json{{"schema", PipelineManifest::kSchema},
                       {"stages", v.stages},
                       {"config_hash", v.config_hash},
                       {"seed", v.seed}};
}

void from_json(const nlohmann::json& j, PipelineManifest& v) {
    j.at("stages").get_to(v.stages);
    v.config_hash = j.value("config_hash", "");
    v.seed = j.value("seed", std::uint64_t{0});
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

const std::vector<std::string>& pipeline_stage_names() {
    static const std::vector<std::string> names = {
        "extract", "persona", "simulate", "export", "evaluate", "report",
    };
    return names;
}

std::string elements_path(const std::string& w) { return (fs::path(w) / "elements.jsonl").string(); }
std::string profiles_path(const std::string& w) { return (fs::path(w) / "profiles.jsonl").string(); }
std::string transcripts_dir(const std::string& w) { return (fs::path(w) / "transcripts").string(); }
std::string dataset_path(const std::string& w) { return (fs::path(w) / "synthlaw.jsonl").string(); }
std::string scenarios_path(const std::string& w) { return (fs::path(w) / "scenarios.jsonl").string(); }
std::string report_path(const std::string& w) { return (fs::path(w) / "report.jsonl").string(); }
std::string report_table_path(const std::string& w) { return (fs::path(w) / "report.txt").string(); }
std::string manifest_path(const std::string& w) { return (fs::path(w) / "manifest.json").string(); }

// ---------------------------------------------------------------------------
// Stage runner
// ---------------------------------------------------------------------------

namespace {

std::uint64_t case_seed(std::uint64_t base, const std::string& case_id) {
    return base ^ fnv1a64(case_id);
}

std::map<std::string, std::string> hash_paths(const std::vector<std::string>& paths) {
    std::map<std::string, std::string> hashes;
    for (const std::string& path : paths) {
        if (fs::is_directory(path)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::recursive_directory_iterator(path)) {
                if (entry.is_regular_file()) files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            std::string combined;
            for (const auto& file : files) {
                combined += file.string() + ":" + file_hash_hex(file.string()) + "\n";
            }
            hashes[path] = fnv1a64_hex(combined);
        } else if (fs::exists(path)) {
            hashes[path] = file_hash_hex(path);
        } else {
            throw Error(ErrorCode::IoError, "stage input missing: " + path);
        }
    }
    return hashes;
}

bool outputs_intact(const StageRecord& record) {
    for (const auto& [path, hash] : record.outputs) {
        if (fs::is_directory(path) || fs::exists(path)) {
            auto current = hash_paths({path});
            if (current.at(path) != hash) return false;
        } else {
            return false;
        }
    }
    return !record.outputs.empty();
}

struct StageIo {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    nlohmann::json params;
};

class StageRunner {
public:
    StageRunner(const PipelineOptions& options, PipelineManifest& manifest)
        : options_(options), manifest_(manifest) {}

    // Returns true when the stage body ran (false = skipped).
    template <typename Body>
    bool run(const std::string& name, const StageIo& io, Body&& body) {
        StageRecord record;
        record.inputs = hash_paths(io.inputs);
        record.params = io.params;

        auto it = manifest_.stages.find(name);
        if (!options_.force && it != manifest_.stages.end() &&
            it->second.inputs == record.inputs && it->second.params == record.params &&
            outputs_intact(it->second)) {
            it->second.skipped = true;
            persist();
            return false;
        }

        const auto start = std::chrono::steady_clock::now();
        body();
        record.elapsed_ms = static_cast<long>(
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count());
        record.outputs = hash_paths(io.outputs);
        record.skipped = false;
        manifest_.stages[name] = std::move(record);
        persist();
        return true;
    }

private:
    void persist() {
        write_text_file(manifest_path(options_.work_dir),
                        nlohmann::json(manifest_).dump(2) + "\n");
    }

    const PipelineOptions& options_;
    PipelineManifest& manifest_;
};

std::vector<Transcript> load_transcripts(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "transcript directory missing: " + dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Transcript> transcripts;
    for (const auto& file : files) {
        transcripts.push_back(
            nlohmann::json::parse(read_text_file(file.string())).get<Transcript>());
    }
    return transcripts;
}

}  // namespace

PipelineManifest run_pipeline(const PipelineOptions& options) {
    const RunConfig& config = options.config;
    if (options.work_dir.empty()) {
        throw Error(ErrorCode::ConfigError, "work_dir: must be set");
    }
    fs::create_directories(options.work_dir);

    for (const std::string& stage : options.stages) {
        if (std::find(pipeline_stage_names().begin(), pipeline_stage_names().end(),
                      stage) == pipeline_stage_names().end()) {
            throw Error(ErrorCode::ConfigError, "unknown stage: " + stage);
        }
    }

    TemplateStore templates = load_templates(config);
    PipelineManifest manifest;
    if (fs::exists(manifest_path(options.work_dir))) {
        manifest = nlohmann::json::parse(read_text_file(manifest_path(options.work_dir)))
                       .get<PipelineManifest>();
    }
    manifest.seed = config.seed;
    manifest.config_hash = options.config_path.empty()
                               ? fnv1a64_hex(nlohmann::json{{"seed", config.seed}}.dump())
                               : file_hash_hex(options.config_path);

    StageRunner runner(options, manifest);
    const std::string& work = options.work_dir;

    auto requested = [&](const std::string& stage) {
        return std::find(options.stages.begin(), options.stages.end(), stage) !=
               options.stages.end();
    };

    if (requested("extract")) {
        if (options.input_path.empty()) {
            throw Error(ErrorCode::ConfigError, "extract requires an input path");
        }
        StageIo io;
        io.inputs = {options.input_path};
        io.outputs = {elements_path(work)};
        io.params = {{"model", model_for_role(config, "extractor")},
                     {"workers", config.workers}};
        runner.run("extract", io, [&] {
            const auto docs = load_documents(options.input_path);
            BackendHandle backend = make_backend(config, "extractor");
            ExtractOptions opts;
            opts.model_id = model_for_role(config, "extractor");
            const auto outcomes =
                extract_corpus(docs, backend.get(), templates, opts, config.workers);
            std::vector<nlohmann::json> lines;
            std::string failures;
            std::vector<LegalElements> ok;
            std::vector<std::string> ids;
            for (const auto& outcome : outcomes) {
                if (outcome.elements) {
                    ok.push_back(*outcome.elements);
                    ids.push_back(outcome.doc_id);
                } else {
                    failures += outcome.doc_id + ": " + outcome.error + "\n";
                }
            }
            if (!failures.empty()) {
                throw Error(ErrorCode::ExtractionParseError,
                            "extraction failures:\n" + failures);
            }
            // Persist with the owning case id on each line.
            std::ofstream out(elements_path(work), std::ios::binary | std::ios::trunc);
            for (size_t i = 0; i < ok.size(); ++i) {
                nlohmann::json line = ok[i];
                line["case_id"] = ids[i];
                line["cause_of_action"] = docs[i].cause_of_action;
                out << line.dump() << "\n";
            }
        });
    }

    struct CaseElements {
        std::string case_id;
        std::string cause_of_action;
        LegalElements elements;
    };
    auto load_elements_with_ids = [&]() -> std::vector<CaseElements> {
        std::vector<CaseElements> out;
        std::ifstream in(elements_path(work), std::ios::binary);
        if (!in) {
            throw Error(ErrorCode::IoError, "missing " + elements_path(work) +
                                                "; run the extract stage first");
        }
        std::string line;
        size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                nlohmann::json j = nlohmann::json::parse(line);
                out.push_back({j.value("case_id", "case-" + std::to_string(line_no)),
                               j.value("cause_of_action", ""), j.get<LegalElements>()});
            } catch (const std::exception& e) {
                throw Error(ErrorCode::SchemaError, elements_path(work) + ":" +
                                                        std::to_string(line_no) + ": " +
                                                        e.what());
            }
        }
        return out;
    };

    if (requested("persona")) {
        StageIo io;
        io.inputs = {elements_path(work)};
        io.outputs = {profiles_path(work)};
        io.params = {{"model", model_for_role(config, "persona")},
                     {"seed", config.seed}};
        runner.run("persona", io, [&] {
            const auto elements = load_elements_with_ids();
            BackendHandle backend = make_backend(config, "persona");
            PersonaGenOptions opts;
            opts.model_id = model_for_role(config, "persona");
            opts.temperature = config.temperature;
            std::vector<CaseProfiles> profiles(elements.size());
            // Persona generation is LLM-backed; scripted runs stay ordered
            // because workers=1 is the scripted contract.
            parallel_for(elements.size(), config.workers, [&](size_t i) {
                const CaseElements& ce = elements[i];
                Rng rng(case_seed(config.seed, ce.case_id));
                const TraitVector traits = sample_traits(rng, config.level_weights);
                const Persona persona =
                    describe_persona(traits, backend.get(), templates, opts);
                const LegalSense sense = assign_legal_sense(rng);
                auto plan = sample_distractor_plan(rng);
                CaseProfiles cp;
                cp.case_id = ce.case_id;
                cp.legal_attribute = ce.cause_of_action;
                cp.seed = case_seed(config.seed, ce.case_id);
                cp.client = build_client_profile(ce.elements, persona, sense,
                                                 std::move(plan));
                cp.lawyer = build_lawyer_profile(ce.elements, default_agenda(),
                                                 templates.get("complaint_template"));
                profiles[i] = std::move(cp);
            });
            write_jsonl(profiles, profiles_path(work));
        });
    }

    if (requested("simulate")) {
        StageIo io;
        io.inputs = {profiles_path(work)};
        io.outputs = {transcripts_dir(work)};
        io.params = {{"client_model", model_for_role(config, "client")},
                     {"lawyer_model", model_for_role(config, "lawyer")},
                     {"supervisor_model", model_for_role(config, "supervisor")},
                     {"max_turns", config.max_turns},
                     {"end_marker", config.end_marker},
                     {"seed", config.seed},
                     {"supervise", config.supervise}};
        runner.run("simulate", io, [&] {
            if (!fs::exists(profiles_path(work))) {
                throw Error(ErrorCode::IoError, "missing " + profiles_path(work));
            }
            const auto profiles = read_jsonl<CaseProfiles>(profiles_path(work));
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
            // Single collector writes all transcripts.
            fs::remove_all(transcripts_dir(work));
            fs::create_directories(transcripts_dir(work));
            for (const Transcript& t : transcripts) {
                write_text_file(
                    (fs::path(transcripts_dir(work)) / (t.case_id + ".json")).string(),
                    nlohmann::json(t).dump() + "\n");
            }
        });
    }

    if (requested("export")) {
        StageIo io;
        io.inputs = {transcripts_dir(work)};
        io.outputs = {dataset_path(work)};
        io.params = nlohmann::json::object();
        runner.run("export", io, [&] {
            const auto transcripts = load_transcripts(transcripts_dir(work));
            std::vector<SftExample> examples;
            examples.reserve(transcripts.size());
            for (const Transcript& t : transcripts) examples.push_back(export_sft(t));
            write_sft_jsonl(examples, dataset_path(work));
        });
    }

    if (requested("evaluate")) {
        const bool external_scenarios = !config.scenarios_path.empty();
        StageIo io;
        io.inputs = external_scenarios
                        ? std::vector<std::string>{config.scenarios_path}
                        : std::vector<std::string>{elements_path(work), profiles_path(work)};
        io.outputs = {report_path(work)};
        io.params = {{"candidate_model", model_for_role(config, "candidate")},
                     {"judge_model", model_for_role(config, "judge")},
                     {"seed", config.seed}};
        runner.run("evaluate", io, [&] {
            std::vector<MileScenario> scenarios;
            if (external_scenarios) {
                scenarios = load_scenarios(config.scenarios_path);
            } else {
                const auto elements = load_elements_with_ids();
                const auto profiles = read_jsonl<CaseProfiles>(profiles_path(work));
                if (elements.size() != profiles.size()) {
                    throw Error(ErrorCode::SchemaError,
                                "elements/profiles line counts differ");
                }
                for (size_t i = 0; i < elements.size(); ++i) {
                    MileScenario s;
                    s.scenario_id = elements[i].case_id;
                    s.client_profile = profiles[i].client;
                    s.ground_truth = derive_ground_truth(
                        elements[i].elements, templates.get("complaint_template"));
                    s.legal_attribute = profiles[i].legal_attribute;
                    scenarios.push_back(std::move(s));
                }
                write_jsonl(scenarios, scenarios_path(work));
            }

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
            bench.workers = config.workers;

            const auto results =
                run_benchmark(scenarios, candidate.get(), client.get(), supervisor.get(),
                              judge.get(), bench, templates, StageRules::defaults());

            std::vector<EvalReport> reports;
            reports.reserve(results.size());
            const std::string eval_dir =
                (fs::path(work) / "eval_transcripts").string();
            fs::remove_all(eval_dir);
            fs::create_directories(eval_dir);
            for (const ScenarioResult& result : results) {
                reports.push_back(result.report);
                if (result.report.error.empty()) {
                    write_text_file((fs::path(eval_dir) /
                                     (result.scenario_id + ".json"))
                                        .string(),
                                    nlohmann::json(result.transcript).dump() + "\n");
                }
            }
            write_jsonl(reports, report_path(work));
        });
    }

    if (requested("report")) {
        StageIo io;
        io.inputs = {report_path(work)};
        io.outputs = {report_table_path(work)};
        io.params = nlohmann::json::object();
        runner.run("report", io, [&] {
            const auto reports = read_jsonl<EvalReport>(report_path(work));
            const ReportSummary summary = summarize_reports(reports);
            write_text_file(report_table_path(work), format_summary(summary, "table"));
        });
    }

    return manifest;
}

}  // namespace maser
