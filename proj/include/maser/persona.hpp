#pragma once

#include "maser/domain.hpp"
#include "maser/gateway.hpp"
#include "maser/templates.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace maser {

// Deterministic PRNG wrapper. Draws go through fixed bit-level conversions so
// sequences are identical across platforms for the same seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0,1) with 53-bit resolution.
    double uniform01();

    // Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi);

private:
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Trait sampling
// ---------------------------------------------------------------------------

// Unnormalized categorical weights for one trait dimension.
struct LevelWeights {
    double high = 2.0;
    double medium = 1.0;
    double low = 2.0;

    bool operator==(const LevelWeights&) const = default;
};

// Throws Error{ConfigError} on non-positive weights.
void check_level_weights(const LevelWeights& weights);

using WeightMap = std::map<std::string, LevelWeights>;

// High:Medium:Low of 2:1:2 everywhere, with emotional stability boosted to
// 3:1:2 so anxious-case clients still skew stable.
WeightMap default_level_weights();

TraitLevel sample_level(Rng& rng, const LevelWeights& weights);

// One independent categorical draw per dimension, in canonical dimension
// order. Deterministic given (seed via rng, weights).
TraitVector sample_traits(Rng& rng, const WeightMap& weights);

// ---------------------------------------------------------------------------
// LLM-backed persona description
// ---------------------------------------------------------------------------

struct PersonaGenOptions {
    std::string model_id;
    double temperature = 0.7;
    int max_tokens = 1024;
};

// Renders the persona-generation template for `traits`, asks the backend for
// a structured reply and parses {description, speaking_style{logic, clarity,
// tone}, interactivity}. One repair retry, then Error{PersonaParseError}.
Persona describe_persona(const TraitVector& traits, ChatBackend& backend,
                         const TemplateStore& templates,
                         const PersonaGenOptions& options);

// Catalog level with its fixed description; random mode draws uniformly 1..5.
LegalSense assign_legal_sense(int explicit_level);
LegalSense assign_legal_sense(Rng& rng);

// Default distractor plan: 1-2 directives over stages 1-4, kinds uniform.
std::vector<DistractorDirective> sample_distractor_plan(Rng& rng);

// ---------------------------------------------------------------------------
// Profile assembly
// ---------------------------------------------------------------------------

// Client side of the information partition: personal and case facts plus
// behavioral style; never the court's analysis or the applicable provisions.
ClientProfile build_client_profile(const LegalElements& elements,
                                   const Persona& persona, const LegalSense& sense,
                                   std::vector<DistractorDirective> distractor_plan);

// Lawyer side: analysis, provisions, agenda and the complaint template; no
// persona or legal-sense fields.
LawyerProfile build_lawyer_profile(const LegalElements& elements, Agenda agenda,
                                   std::string complaint_template);

// ---------------------------------------------------------------------------
// Supervisor context
// ---------------------------------------------------------------------------

// What the supervisor can see while reviewing one utterance. Client reviews
// mount case information and personality features; lawyer reviews mount both
// profiles and the agenda. Distractors for the active stage ride along in
// both cases. The history view is read-only and attached by the engine.
struct SupervisorContext {
    Role speaker = Role::Client;
    AgendaStage stage;

    std::string personal_info;
    std::string case_info;
    Persona persona;
    LegalSense legal_sense;

    struct LawyerMounts {
        std::string case_analysis;
        std::string legal_provisions;
        Agenda agenda;
    };
    std::optional<LawyerMounts> lawyer;

    std::vector<DistractorDirective> active_distractors;
    const std::vector<Round>* history = nullptr;
};

SupervisorContext supervisor_context(const ClientProfile& client,
                                     const LawyerProfile& lawyer,
                                     const AgendaStage& current_stage, Role speaker);

}  // namespace maser
