#pragma once

#include <string>

#include "moeq/training.hpp"

namespace moeq {

// On-disk format: a magic line, a single-line JSON header (sorted keys), and
// the flat little-endian float64 payload in the network's tensor-view order.
// The header carries the format version, scenario, role, agent kind, K, the
// shape table, seed, and the full config snapshot, so a checkpoint alone can
// reconstruct its run. Optimizer moments are not serialized.
inline constexpr char kCheckpointMagic[] = "MOEQCKPT";
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  RunConfig config;
  std::string role;  // "good" | "adversary"
  PolicyNet net;

  Checkpoint(RunConfig c, std::string r, PolicyNet n)
      : config(std::move(c)), role(std::move(r)), net(std::move(n)) {}
};

void save_checkpoint(const std::string& path, Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// Fully textual equivalent of the binary file (payload as a JSON array),
// for external tooling; same header fields.
std::string checkpoint_to_json(Checkpoint& ckpt);

}  // namespace moeq
