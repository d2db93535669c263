#include "moeq/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace moeq {

namespace {

std::string num(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("csv: number formatting failed");
  return std::string(buf, p);
}

}  // namespace

std::string metrics_csv(const std::vector<EpisodeRecord>& records, int window) {
  std::vector<double> good(records.size()), adv(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    good[i] = records[i].reward_good;
    adv[i] = records[i].reward_adv;
  }
  const std::vector<double> roll_good = rolling_score(good, window);
  const std::vector<double> roll_adv = rolling_score(adv, window);

  std::ostringstream o;
  o << "# moeq-metrics-v1\n";
  o << "episode,reward_good,reward_adv,rolling_score_good,rolling_score_adv,epsilon\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    o << records[i].episode << ',' << num(records[i].reward_good) << ','
      << num(records[i].reward_adv) << ',' << num(roll_good[i]) << ',' << num(roll_adv[i])
      << ',' << num(records[i].epsilon_end) << '\n';
  }
  return o.str();
}

std::string eval_stats_csv(const std::vector<std::pair<std::string, EvalStats>>& rows) {
  std::ostringstream o;
  o << "# moeq-eval-v1\n";
  o << "algorithm,mean_agent,max_agent,mean_adversary,max_adversary\n";
  for (const auto& [algorithm, st] : rows) {
    o << algorithm << ',' << num(st.mean_good) << ',' << num(st.max_good) << ','
      << num(st.mean_adv) << ',' << num(st.max_adv) << '\n';
  }
  return o.str();
}

std::string eval_episodes_csv(const EvalStats& stats) {
  std::ostringstream o;
  o << "# moeq-eval-episodes-v1\n";
  o << "episode,reward_good,reward_adv\n";
  for (const EpisodeRecord& r : stats.episodes) {
    o << r.episode << ',' << num(r.reward_good) << ',' << num(r.reward_adv) << '\n';
  }
  return o.str();
}

std::string trajectories_csv(const std::vector<TrajectoryRow>& rows) {
  std::ostringstream o;
  o << "# moeq-trajectories-v1\n";
  o << "episode,step,agent_x,agent_y,adv_x,adv_y,action_good,action_adv,"
       "reward_good,reward_adv\n";
  for (const TrajectoryRow& r : rows) {
    o << r.episode << ',' << r.step << ',' << num(r.agent_x) << ',' << num(r.agent_y) << ','
      << num(r.adv_x) << ',' << num(r.adv_y) << ',' << r.action_good << ',' << r.action_adv
      << ',' << num(r.reward_good) << ',' << num(r.reward_adv) << '\n';
  }
  return o.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace moeq
