#include "moeq/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace moeq {

ScenarioKind parse_scenario(const std::string& name) {
  if (name == "simple_push") return ScenarioKind::kSimplePush;
  if (name == "simple_adversary") return ScenarioKind::kSimpleAdversary;
  throw std::runtime_error("unknown scenario '" + name +
                           "' (expected simple_push or simple_adversary)");
}

std::string scenario_name(ScenarioKind kind) {
  return kind == ScenarioKind::kSimplePush ? "simple_push" : "simple_adversary";
}

RunConfig preset_config(ScenarioKind scenario, const std::string& preset) {
  if (preset != "paper" && preset != "desk") {
    throw std::runtime_error("unknown preset '" + preset + "' (expected paper or desk)");
  }
  RunConfig c;  // defaults are the published SimplePush setup
  c.scenario = scenario;
  if (scenario == ScenarioKind::kSimpleAdversary) {
    c.replay_memory_size = 100'000;
    c.learning_rate = 0.001;
  }
  if (preset == "desk") {
    c.total_training_episodes = 300;
    c.total_testing_episodes = 100;
    c.replay_start_size = 1'000;
    c.replay_memory_size = 50'000;
    c.annealing_steps = 50'000;
  }
  validate_config(c);
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& ctx) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw std::runtime_error(ctx + ": bad number '" + v + "'");
  return out;
}

long long parse_ll(const std::string& v, const std::string& ctx) {
  long long out = 0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw std::runtime_error(ctx + ": bad integer '" + v + "'");
  return out;
}

int parse_int(const std::string& v, const std::string& ctx) {
  const long long x = parse_ll(v, ctx);
  if (x < INT32_MIN || x > INT32_MAX) throw std::runtime_error(ctx + ": integer out of range");
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& v, const std::string& ctx) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw std::runtime_error(ctx + ": bad integer '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, const std::string& ctx) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::runtime_error(ctx + ": bad boolean '" + v + "' (expected true or false)");
}

struct KeyValue {
  std::string section, key, value;
};

std::vector<KeyValue> tokenize(const std::string& text, const std::string& origin) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string ctx = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw std::runtime_error(ctx + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error(ctx + ": expected key = value");
    KeyValue kv;
    kv.section = section;
    kv.key = trim(line.substr(0, eq));
    kv.value = trim(line.substr(eq + 1));
    if (kv.key.empty()) throw std::runtime_error(ctx + ": empty key");
    out.push_back(std::move(kv));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> kSetters = {
      {"run.scenario", [](RunConfig& c, const std::string& v, const std::string&) {
         c.scenario = parse_scenario(v);
       }},
      {"run.preset", [](RunConfig&, const std::string&, const std::string&) {
         // consumed before overrides are applied
       }},
      {"run.seed", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.seed = parse_u64(v, x);
       }},
      {"run.use_moe", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.use_moe = parse_bool(v, x);
       }},
      {"run.double_q", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.double_q = parse_bool(v, x);
       }},
      {"run.num_experts", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.num_experts = parse_int(v, x);
       }},
      {"env.dt", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.physics.dt = parse_double(v, x);
       }},
      {"env.damping", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.physics.damping = parse_double(v, x);
       }},
      {"env.accel", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.physics.accel = parse_double(v, x);
       }},
      {"env.max_speed", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.physics.max_speed = parse_double(v, x);
       }},
      {"env.episode_length", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.physics.episode_length = parse_int(v, x);
       }},
      {"training.minibatch_size", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.minibatch_size = parse_int(v, x);
       }},
      {"training.replay_memory_size", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.replay_memory_size = parse_int(v, x);
       }},
      {"training.target_network_update_frequency",
       [](RunConfig& c, const std::string& v, const std::string& x) {
         c.target_network_update_frequency = parse_int(v, x);
       }},
      {"training.train_frequency", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.train_frequency = parse_int(v, x);
       }},
      {"training.discount_factor", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.discount_factor = parse_double(v, x);
       }},
      {"training.learning_rate", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.learning_rate = parse_double(v, x);
       }},
      {"training.initial_epsilon", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.initial_epsilon = parse_double(v, x);
       }},
      {"training.final_epsilon", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.final_epsilon = parse_double(v, x);
       }},
      {"training.epsilon_decay_fraction",
       [](RunConfig& c, const std::string& v, const std::string& x) {
         c.epsilon_decay_fraction = parse_double(v, x);
       }},
      {"training.replay_start_size", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.replay_start_size = parse_int(v, x);
       }},
      {"training.total_training_episodes",
       [](RunConfig& c, const std::string& v, const std::string& x) {
         c.total_training_episodes = parse_int(v, x);
       }},
      {"training.total_testing_episodes",
       [](RunConfig& c, const std::string& v, const std::string& x) {
         c.total_testing_episodes = parse_int(v, x);
       }},
      {"training.frozen_opponent_epsilon",
       [](RunConfig& c, const std::string& v, const std::string& x) {
         c.frozen_opponent_epsilon = parse_double(v, x);
       }},
      {"training.checkpoint_interval",
       [](RunConfig& c, const std::string& v, const std::string& x) {
         c.checkpoint_interval = parse_int(v, x);
       }},
      {"per.alpha", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.alpha = parse_double(v, x);
       }},
      {"per.beta", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.beta = parse_double(v, x);
       }},
      {"per.epsilon_per", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.epsilon_per = parse_double(v, x);
       }},
      {"per.annealing_steps", [](RunConfig& c, const std::string& v, const std::string& x) {
         c.annealing_steps = parse_ll(v, x);
       }},
  };
  return kSetters;
}

std::string fmt_double(double x) {
  // Fixed notation when it stays compact (so 1e-4 prints as 0.0001);
  // either way to_chars gives the shortest round-trip form.
  char buf[64];
  const double ax = std::abs(x);
  const bool fixed = x == 0.0 || (ax >= 1e-5 && ax < 1e15);
  const auto [p, ec] = fixed ? std::to_chars(buf, buf + sizeof(buf), x,
                                             std::chars_format::fixed)
                             : std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("fmt_double failed");
  return std::string(buf, p);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::string& preset_override) {
  const std::vector<KeyValue> pairs = tokenize(text, origin);

  // Scenario and preset choose the baseline the remaining keys override.
  ScenarioKind scenario = ScenarioKind::kSimplePush;
  std::string preset = "paper";
  for (const KeyValue& kv : pairs) {
    if (kv.section == "run" && kv.key == "scenario") scenario = parse_scenario(kv.value);
    if (kv.section == "run" && kv.key == "preset") preset = kv.value;
  }
  if (!preset_override.empty()) preset = preset_override;

  RunConfig c = preset_config(scenario, preset);
  const auto& table = setters();
  for (const KeyValue& kv : pairs) {
    const std::string full = kv.section + "." + kv.key;
    const auto it = table.find(full);
    if (it == table.end()) {
      throw std::runtime_error(origin + ": unknown key '" + kv.key + "' in section [" +
                               kv.section + "]");
    }
    it->second(c, kv.value, origin + " [" + kv.section + "] " + kv.key);
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path, const std::string& preset_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path, preset_override);
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream o;
  o << "[run]\n";
  o << "scenario = " << scenario_name(c.scenario) << "\n";
  o << "seed = " << c.seed << "\n";
  o << "use_moe = " << (c.use_moe ? "true" : "false") << "\n";
  o << "double_q = " << (c.double_q ? "true" : "false") << "\n";
  o << "num_experts = " << c.num_experts << "\n";
  o << "\n[env]\n";
  o << "dt = " << fmt_double(c.physics.dt) << "\n";
  o << "damping = " << fmt_double(c.physics.damping) << "\n";
  o << "accel = " << fmt_double(c.physics.accel) << "\n";
  o << "max_speed = " << fmt_double(c.physics.max_speed) << "\n";
  o << "episode_length = " << c.physics.episode_length << "\n";
  o << "\n[training]\n";
  o << "minibatch_size = " << c.minibatch_size << "\n";
  o << "replay_memory_size = " << c.replay_memory_size << "\n";
  o << "target_network_update_frequency = " << c.target_network_update_frequency << "\n";
  o << "train_frequency = " << c.train_frequency << "\n";
  o << "discount_factor = " << fmt_double(c.discount_factor) << "\n";
  o << "learning_rate = " << fmt_double(c.learning_rate) << "\n";
  o << "initial_epsilon = " << fmt_double(c.initial_epsilon) << "\n";
  o << "final_epsilon = " << fmt_double(c.final_epsilon) << "\n";
  o << "epsilon_decay_fraction = " << fmt_double(c.epsilon_decay_fraction) << "\n";
  o << "replay_start_size = " << c.replay_start_size << "\n";
  o << "total_training_episodes = " << c.total_training_episodes << "\n";
  o << "total_testing_episodes = " << c.total_testing_episodes << "\n";
  o << "frozen_opponent_epsilon = " << fmt_double(c.frozen_opponent_epsilon) << "\n";
  o << "checkpoint_interval = " << c.checkpoint_interval << "\n";
  o << "\n[per]\n";
  o << "alpha = " << fmt_double(c.alpha) << "\n";
  o << "beta = " << fmt_double(c.beta) << "\n";
  o << "epsilon_per = " << fmt_double(c.epsilon_per) << "\n";
  o << "annealing_steps = " << c.annealing_steps << "\n";
  return o.str();
}

void validate_config(const RunConfig& c) {
  auto bad = [](const std::string& key, const std::string& why) {
    throw std::runtime_error("config key '" + key + "' " + why);
  };
  if (c.num_experts < 1) bad("num_experts", "must be >= 1");
  if (!(c.physics.dt > 0)) bad("dt", "must be positive");
  if (!(c.physics.damping >= 0 && c.physics.damping < 1)) bad("damping", "must be in [0,1)");
  if (!(c.physics.accel > 0)) bad("accel", "must be positive");
  if (!(c.physics.max_speed > 0)) bad("max_speed", "must be positive");
  if (c.physics.episode_length < 1) bad("episode_length", "must be >= 1");
  if (c.minibatch_size < 1) bad("minibatch_size", "must be >= 1");
  if (c.replay_memory_size < c.minibatch_size)
    bad("replay_memory_size", "must be >= minibatch_size");
  if (c.target_network_update_frequency < 1)
    bad("target_network_update_frequency", "must be >= 1");
  if (c.train_frequency < 1) bad("train_frequency", "must be >= 1");
  if (!(c.discount_factor >= 0 && c.discount_factor <= 1))
    bad("discount_factor", "must be in [0,1]");
  if (!(c.learning_rate > 0)) bad("learning_rate", "must be positive");
  if (!(c.initial_epsilon >= 0 && c.initial_epsilon <= 1))
    bad("initial_epsilon", "must be in [0,1]");
  if (!(c.final_epsilon >= 0 && c.final_epsilon <= 1)) bad("final_epsilon", "must be in [0,1]");
  if (!(c.epsilon_decay_fraction > 0 && c.epsilon_decay_fraction <= 1))
    bad("epsilon_decay_fraction", "must be in (0,1]");
  if (c.replay_start_size < 0) bad("replay_start_size", "must be >= 0");
  if (c.total_training_episodes < 1) bad("total_training_episodes", "must be >= 1");
  if (c.total_testing_episodes < 1) bad("total_testing_episodes", "must be >= 1");
  if (!(c.frozen_opponent_epsilon >= 0 && c.frozen_opponent_epsilon <= 1))
    bad("frozen_opponent_epsilon", "must be in [0,1]");
  if (c.checkpoint_interval < 0) bad("checkpoint_interval", "must be >= 0");
  if (!(c.alpha >= 0)) bad("alpha", "must be >= 0");
  if (!(c.beta > 0 && c.beta <= 1)) bad("beta", "must be in (0,1]");
  if (!(c.epsilon_per > 0)) bad("epsilon_per", "must be positive");
  if (c.annealing_steps < 1) bad("annealing_steps", "must be >= 1");
}

}  // namespace moeq
