#pragma once

#include "maser/gateway.hpp"
#include "maser/persona.hpp"
#include "maser/sim.hpp"
#include "maser/templates.hpp"

#include <map>
#include <memory>
#include <string>

namespace maser {

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

// How one role's chat backend is realized.
struct BackendSpec {
    std::string type = "live";  // live | scripted | record | replay
    std::string script;         // scripted: path to a script JSONL file
};

// Everything one run needs: model ids per role, backend wiring, loop knobs,
// seeds and directories. File values are overridden by environment variables
// (MASER_API_KEY, MASER_BASE_URL, MASER_CACHE_DIR), which are overridden by
// CLI flags.
struct RunConfig {
    std::map<std::string, std::string> models;    // role -> model id
    std::map<std::string, BackendSpec> backends;  // role -> backend wiring
    std::string base_url;
    std::string api_key;
    int max_turns = 15;
    std::string end_marker = "Inquiry ends";
    std::uint64_t seed = 0;
    std::string template_dir = "templates";
    int workers = 1;
    std::string cache_dir;
    std::string supervise = "both";  // both | client_only
    double temperature = 0.7;
    double judge_temperature = 0.0;
    WeightMap level_weights = default_level_weights();
    std::string scenarios_path;    // evaluate: load instead of deriving
    std::string agenda_path;       // optional localized agenda (JSON)
    std::string stage_rules_path;  // optional localized stage keywords (JSON)

    static constexpr const char* kSchema = "maser.config.v1";
};

// Roles that must have a model id resolvable (directly or via fallback).
const std::vector<std::string>& config_roles();

// Template names the pipelines reference; all must exist at load time.
const std::vector<std::string>& required_templates();

// Loads and resolves a config file. `env` defaults to the process
// environment; pass a map in tests. Throws Error{ConfigError} naming the
// offending field.
RunConfig load_config(const std::string& path,
                      const std::map<std::string, std::string>* env = nullptr);

// Validation shared by load_config and CLI flag overrides.
void validate_config(const RunConfig& config);

// Loads the template store for `config` and verifies every required template
// is present.
TemplateStore load_templates(const RunConfig& config);

// Model id for a role, falling back through the role fallback chain
// (candidate -> lawyer, eval_client -> client, eval_supervisor -> supervisor,
// extractor/persona -> lawyer-side default).
std::string model_for_role(const RunConfig& config, const std::string& role);

// ---------------------------------------------------------------------------
// Backend construction
// ---------------------------------------------------------------------------

// Owns whatever the spec required (a live client under a recorder, a script).
struct BackendHandle {
    std::unique_ptr<ChatBackend> inner;  // present for record mode
    std::unique_ptr<ChatBackend> backend;

    ChatBackend& get() { return *backend; }
};

// Builds the backend for a role from its spec; fallback chain as above.
BackendHandle make_backend(const RunConfig& config, const std::string& role);

// Sim config derived from the run config.
SimConfig sim_config_from(const RunConfig& config);

// The agenda for this run: agenda_path when set, otherwise the default.
Agenda agenda_from(const RunConfig& config);

// Stage keyword rules: stage_rules_path when set, otherwise the defaults.
StageRules stage_rules_from(const RunConfig& config);

}  // namespace maser
