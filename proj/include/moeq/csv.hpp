#pragma once

#include <string>
#include <utility>
#include <vector>

#include "moeq/training.hpp"

namespace moeq {

// All CSVs start with a version comment, then a fixed header row. Doubles
// print with round-trip precision so downstream recomputation is exact.

// episode,reward_good,reward_adv,rolling_score_good,rolling_score_adv,epsilon
std::string metrics_csv(const std::vector<EpisodeRecord>& records, int window = 100);

// algorithm,mean_agent,max_agent,mean_adversary,max_adversary — one row per
// evaluated algorithm; "agent" columns are the good agent's.
std::string eval_stats_csv(const std::vector<std::pair<std::string, EvalStats>>& rows);

// episode,reward_good,reward_adv — the per-episode data behind an EvalStats.
std::string eval_episodes_csv(const EvalStats& stats);

// episode,step,agent_x,agent_y,adv_x,adv_y,action_good,action_adv,
// reward_good,reward_adv
std::string trajectories_csv(const std::vector<TrajectoryRow>& rows);

// Binary-mode write so content maps to file bytes one-to-one.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace moeq
