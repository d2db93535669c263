#pragma once

#include <string>

#include "moeq/training.hpp"

namespace moeq {

ScenarioKind parse_scenario(const std::string& name);  // simple_push | simple_adversary
std::string scenario_name(ScenarioKind kind);

// Baseline hyperparameters. "paper" mirrors the published setup for the
// scenario (they differ in replay size and learning rate); "desk" shrinks
// episode counts, warm-up, buffer, and annealing ~10x for laptop runs.
RunConfig preset_config(ScenarioKind scenario, const std::string& preset);

// Flat key = value text in [section] groups; '#' or ';' start comments.
// The file's scenario and preset pick the baseline, remaining keys override
// it. Unknown sections or keys are hard errors naming the offender, as are
// out-of-range values. preset_override, when non-empty, beats the file's
// own preset key.
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::string& preset_override = "");
RunConfig load_config(const std::string& path, const std::string& preset_override = "");

// Full effective config in file syntax; parsing it back reproduces `c`
// exactly (doubles print with round-trip precision).
std::string config_to_text(const RunConfig& c);

// Range checks shared by presets and parsed files; throws naming the key.
void validate_config(const RunConfig& c);

}  // namespace moeq
