#pragma once

#include <optional>
#include <string>

#include "moeq/training.hpp"

namespace moeq {

struct CliOptions {
  std::string config_path;       // empty: build the config from scenario+preset
  std::string scenario;          // only when no config file is given
  std::string preset;            // beats the file's own preset key
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool json_export = false;      // also write .ckpt.json next to checkpoints
  bool dump_trajectories = false;
};

// Config resolution order: preset baseline (from file or flags), file
// overrides, then --seed.
RunConfig resolve_config(const CliOptions& opt);

// Each command returns a process exit code and reports failures on stderr
// (bad config, incompatible checkpoints, non-finite training, ...).

// Phase 1. Writes good_agent.ckpt, adversary.ckpt, metrics.csv, scores.svg.
int cmd_train_ali(const CliOptions& opt);

// Phase 2 against a frozen phase-1 checkpoint. Writes primary.ckpt,
// metrics.csv, scores.svg.
int cmd_train_main(const CliOptions& opt, const std::string& opponent_checkpoint);

// Greedy test phase over one good + one adversary checkpoint (either order).
// Writes eval_stats.csv, eval_episodes.csv, and trajectories.csv on request.
int cmd_eval(const CliOptions& opt, const std::string& checkpoint_a,
             const std::string& checkpoint_b);

// Prints the full effective config for a scenario/preset pair to stdout.
int cmd_show_config(const std::string& scenario, const std::string& preset);

}  // namespace moeq
