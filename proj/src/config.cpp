#include "maser/config.hpp"

#include "maser/error.hpp"
#include "maser/jsonl.hpp"
#include "maser/strings.hpp"

#include <cstdlib>

namespace maser {

const std::vector<std::string>& config_roles() {
    static const std::vector<std::string> roles = {
        "client", "lawyer", "supervisor", "judge", "extractor", "persona",
    };
    return roles;
}

const std::vector<std::string>& required_templates() {
    static const std::vector<std::string> names = {
        "client_personal", "client_corporate", "client_open",
        "lawyer_system", "supervisor_client", "supervisor_lawyer",
        "supervisor_review", "revise", "complaint_draft", "complaint_template",
        "extraction", "persona_gen", "stage_detect",
        "judge_interaction", "judge_local", "judge_sta", "judge_prof",
        "judge_consistency",
        "repair_json", "repair_verdict", "repair_score", "repair_interaction",
    };
    return names;
}

namespace {

std::map<std::string, std::string> process_env() {
    std::map<std::string, std::string> env;
    for (const char* name : {"MASER_API_KEY", "MASER_BASE_URL", "MASER_CACHE_DIR"}) {
        if (const char* value = std::getenv(name)) env[name] = value;
    }
    return env;
}

LevelWeights weights_from_json(const nlohmann::json& j, const std::string& field) {
    LevelWeights w;
    try {
        w.high = j.at("high").get<double>();
        w.medium = j.at("medium").get<double>();
        w.low = j.at("low").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigError, field + ": " + e.what());
    }
    if (w.high <= 0 || w.medium <= 0 || w.low <= 0) {
        throw Error(ErrorCode::ConfigError, field + ": weights must be positive");
    }
    return w;
}

}  // namespace

RunConfig load_config(const std::string& path,
                      const std::map<std::string, std::string>* env) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ConfigError, path + ": " + e.what());
    }
    if (j.contains("schema") && j.at("schema").get<std::string>() != RunConfig::kSchema) {
        throw Error(ErrorCode::ConfigError, "schema: expected " +
                                                std::string(RunConfig::kSchema));
    }

    RunConfig config;
    try {
        if (j.contains("models")) {
            config.models = j.at("models").get<std::map<std::string, std::string>>();
        }
        if (j.contains("backends")) {
            for (const auto& [role, spec] : j.at("backends").items()) {
                BackendSpec b;
                b.type = spec.value("type", "live");
                b.script = spec.value("script", "");
                config.backends[role] = b;
            }
        }
        config.base_url = j.value("base_url", "");
        config.api_key = j.value("api_key", "");
        config.max_turns = j.value("max_turns", 15);
        config.end_marker = j.value("end_marker", "Inquiry ends");
        config.seed = j.value("seed", std::uint64_t{0});
        config.template_dir = j.value("template_dir", "templates");
        config.workers = j.value("workers", 1);
        config.cache_dir = j.value("cache_dir", "");
        config.supervise = j.value("supervise", "both");
        config.temperature = j.value("temperature", 0.7);
        config.judge_temperature = j.value("judge_temperature", 0.0);
        config.scenarios_path = j.value("scenarios", "");
        config.agenda_path = j.value("agenda", "");
        config.stage_rules_path = j.value("stage_rules", "");
        if (j.contains("level_weights")) {
            for (const auto& [dim, w] : j.at("level_weights").items()) {
                config.level_weights[dim] = weights_from_json(w, "level_weights." + dim);
            }
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("config: ") + e.what());
    }

    // Environment overrides file values.
    const std::map<std::string, std::string> fallback_env = env ? *env : process_env();
    auto env_value = [&](const char* name) -> const std::string* {
        auto it = fallback_env.find(name);
        return it == fallback_env.end() ? nullptr : &it->second;
    };
    if (const std::string* v = env_value("MASER_API_KEY")) config.api_key = *v;
    if (const std::string* v = env_value("MASER_BASE_URL")) config.base_url = *v;
    if (const std::string* v = env_value("MASER_CACHE_DIR")) config.cache_dir = *v;

    validate_config(config);
    return config;
}

void validate_config(const RunConfig& config) {
    if (config.max_turns < 1) {
        throw Error(ErrorCode::ConfigError, "max_turns: must be >= 1");
    }
    if (trim(config.end_marker).empty()) {
        throw Error(ErrorCode::ConfigError, "end_marker: must be non-empty");
    }
    if (config.workers < 1) {
        throw Error(ErrorCode::ConfigError, "workers: must be >= 1");
    }
    if (config.supervise != "both" && config.supervise != "client_only") {
        throw Error(ErrorCode::ConfigError,
                    "supervise: must be \"both\" or \"client_only\"");
    }
    if (config.temperature < 0 || config.judge_temperature < 0) {
        throw Error(ErrorCode::ConfigError, "temperature: must be >= 0");
    }
    for (const auto& [role, spec] : config.backends) {
        if (spec.type != "live" && spec.type != "scripted" && spec.type != "record" &&
            spec.type != "replay") {
            throw Error(ErrorCode::ConfigError,
                        "backends." + role + ".type: unknown type " + spec.type);
        }
        if (spec.type == "scripted" && spec.script.empty()) {
            throw Error(ErrorCode::ConfigError,
                        "backends." + role + ".script: required for scripted backends");
        }
        if ((spec.type == "record" || spec.type == "replay") && config.cache_dir.empty()) {
            throw Error(ErrorCode::ConfigError,
                        "cache_dir: required for record/replay backends");
        }
    }
    for (const auto& [dim, weights] : config.level_weights) {
        (void)dim;
        check_level_weights(weights);
    }
}

TemplateStore load_templates(const RunConfig& config) {
    TemplateStore store = TemplateStore::load_dir(config.template_dir);
    for (const auto& name : required_templates()) {
        if (!store.has(name)) {
            throw Error(ErrorCode::ConfigError,
                        "template_dir: missing required template " + name + ".tmpl in " +
                            config.template_dir);
        }
    }
    return store;
}

namespace {

// candidate plays the lawyer; evaluation client/supervisor default to the
// generation ones.
std::string fallback_role(const std::string& role) {
    if (role == "candidate") return "lawyer";
    if (role == "eval_client") return "client";
    if (role == "eval_supervisor") return "supervisor";
    return "";
}

}  // namespace

std::string model_for_role(const RunConfig& config, const std::string& role) {
    auto it = config.models.find(role);
    if (it != config.models.end()) return it->second;
    const std::string fallback = fallback_role(role);
    if (!fallback.empty()) {
        it = config.models.find(fallback);
        if (it != config.models.end()) return it->second;
    }
    throw Error(ErrorCode::ConfigError, "models." + role + ": no model id configured");
}

BackendHandle make_backend(const RunConfig& config, const std::string& role) {
    const BackendSpec* spec = nullptr;
    auto it = config.backends.find(role);
    if (it != config.backends.end()) {
        spec = &it->second;
    } else {
        const std::string fallback = fallback_role(role);
        if (!fallback.empty()) {
            it = config.backends.find(fallback);
            if (it != config.backends.end()) spec = &it->second;
        }
    }
    static const BackendSpec kLiveDefault;
    if (!spec) spec = &kLiveDefault;

    BackendHandle handle;
    if (spec->type == "scripted") {
        handle.backend = ScriptedBackend::from_file(spec->script);
    } else if (spec->type == "replay") {
        handle.backend = std::make_unique<ReplayBackend>(config.cache_dir);
    } else if (spec->type == "record") {
        LiveConfig live;
        live.base_url = config.base_url;
        live.api_key = config.api_key;
        handle.inner = make_live_backend(std::move(live));
        handle.backend = std::make_unique<RecordingBackend>(*handle.inner, config.cache_dir);
    } else {
        LiveConfig live;
        live.base_url = config.base_url;
        live.api_key = config.api_key;
        handle.backend = make_live_backend(std::move(live));
    }
    return handle;
}

SimConfig sim_config_from(const RunConfig& config) {
    SimConfig sim;
    sim.max_turns = config.max_turns;
    sim.end_marker = config.end_marker;
    sim.client_model = model_for_role(config, "client");
    sim.lawyer_model = model_for_role(config, "lawyer");
    sim.supervisor_model = model_for_role(config, "supervisor");
    sim.temperature = config.temperature;
    sim.seed = config.seed;
    sim.supervise = config.supervise == "client_only" ? SuperviseMode::ClientOnly
                                                      : SuperviseMode::BothRoles;
    return sim;
}

}  // namespace maser
