#pragma once

#include "maser/casebook.hpp"
#include "maser/config.hpp"
#include "maser/domain.hpp"

#include <map>
#include <string>
#include <vector>

namespace maser {

// ---------------------------------------------------------------------------
// Per-case profile records (persona stage output)
// ---------------------------------------------------------------------------

struct CaseProfiles {
    std::string case_id;
    std::string legal_attribute;
    std::uint64_t seed = 0;
    ClientProfile client;
    LawyerProfile lawyer;

    static constexpr const char* kSchema = "maser.profiles.v1";
};

void to_json(nlohmann::json& j, const CaseProfiles& v);
void from_json(const nlohmann::json& j, CaseProfiles& v);

// ---------------------------------------------------------------------------
// Pipeline manifests
// ---------------------------------------------------------------------------

struct StageRecord {
    std::map<std::string, std::string> inputs;   // path -> content hash
    std::map<std::string, std::string> outputs;  // path -> content hash
    nlohmann::json params;                       // model ids, seeds, knobs
    long elapsed_ms = 0;
    bool skipped = false;
};

struct PipelineManifest {
    std::map<std::string, StageRecord> stages;
    std::string config_hash;
    std::uint64_t seed = 0;

    static constexpr const char* kSchema = "maser.manifest.v1";
};

void to_json(nlohmann::json& j, const StageRecord& v);
void from_json(const nlohmann::json& j, StageRecord& v);
void to_json(nlohmann::json& j, const PipelineManifest& v);
void from_json(const nlohmann::json& j, PipelineManifest& v);

// ---------------------------------------------------------------------------
// Stage runner
// ---------------------------------------------------------------------------

// Known stages in execution order.
const std::vector<std::string>& pipeline_stage_names();

struct PipelineOptions {
    RunConfig config;
    std::string config_path;     // hashed into the manifest
    std::string input_path;      // extract input: document dir/file
    std::string work_dir;        // all stage artifacts live here
    std::vector<std::string> stages;
    bool force = false;          // rerun even when inputs are unchanged
};

// Fixed artifact locations under the work dir.
std::string elements_path(const std::string& work_dir);
std::string profiles_path(const std::string& work_dir);
std::string transcripts_dir(const std::string& work_dir);
std::string dataset_path(const std::string& work_dir);
std::string scenarios_path(const std::string& work_dir);
std::string report_path(const std::string& work_dir);
std::string report_table_path(const std::string& work_dir);
std::string manifest_path(const std::string& work_dir);

// Executes the requested stages in order. A stage whose inputs, params and
// recorded outputs are unchanged is skipped unless `force`. Any stage error
// stops the run. Returns the updated manifest (also written to the work dir).
PipelineManifest run_pipeline(const PipelineOptions& options);

}  // namespace maser
