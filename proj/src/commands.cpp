#include "moeq/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "moeq/checkpoint.hpp"
#include "moeq/config.hpp"
#include "moeq/csv.hpp"
#include "moeq/svg.hpp"

namespace moeq {

namespace {

namespace fs = std::filesystem;

int fail(const std::exception& e) {
  std::fprintf(stderr, "error: %s\n", e.what());
  return 1;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void emit_checkpoint(const std::string& path, const RunConfig& c, const std::string& role,
                     PolicyNet net, bool json_export) {
  Checkpoint ckpt(c, role, std::move(net));
  save_checkpoint(path, ckpt);
  if (json_export) write_file(path + ".json", checkpoint_to_json(ckpt));
}

std::string snapshot_name(const std::string& stem, int episode) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_ep%06d.ckpt", episode + 1);
  return stem + buf;
}

// Periodic snapshots during training, one file per side per interval.
TrainHooks checkpoint_hooks(const RunConfig& c, const CliOptions& opt,
                            const std::string& good_stem, const std::string& adv_stem) {
  TrainHooks hooks;
  if (c.checkpoint_interval <= 0) return hooks;
  hooks.on_episode_end = [c, opt, good_stem, adv_stem](const EpisodeRecord& rec,
                                                       const PolicyNet* good,
                                                       const PolicyNet* adv) {
    if ((rec.episode + 1) % c.checkpoint_interval != 0) return;
    if (good) {
      emit_checkpoint(join(opt.out_dir, snapshot_name(good_stem, rec.episode)), c, "good",
                      *good, opt.json_export);
    }
    if (adv) {
      emit_checkpoint(join(opt.out_dir, snapshot_name(adv_stem, rec.episode)), c,
                      "adversary", *adv, opt.json_export);
    }
  };
  return hooks;
}

void write_metrics(const CliOptions& opt, const std::string& scenario,
                   const std::vector<EpisodeRecord>& records) {
  write_file(join(opt.out_dir, "metrics.csv"), metrics_csv(records));
  std::vector<double> good(records.size()), adv(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    good[i] = records[i].reward_good;
    adv[i] = records[i].reward_adv;
  }
  const std::vector<Series> series = {{"good agent", rolling_score(good), ""},
                                      {"adversary", rolling_score(adv), ""}};
  write_file(join(opt.out_dir, "scores.svg"),
             line_chart_svg("Rolling scores — " + scenario, "episode",
                            "rolling score (100 episodes)", series));
}

}  // namespace

RunConfig resolve_config(const CliOptions& opt) {
  RunConfig c;
  if (!opt.config_path.empty()) {
    c = load_config(opt.config_path, opt.preset);
    if (!opt.scenario.empty() && parse_scenario(opt.scenario) != c.scenario) {
      throw std::runtime_error(
          "--scenario disagrees with the config file; set the scenario in one place");
    }
  } else {
    const std::string scen = opt.scenario.empty() ? "simple_push" : opt.scenario;
    c = preset_config(parse_scenario(scen), opt.preset.empty() ? "paper" : opt.preset);
  }
  if (opt.seed) {
    c.seed = *opt.seed;
    validate_config(c);
  }
  return c;
}

int cmd_train_ali(const CliOptions& opt) {
  try {
    RunConfig c = resolve_config(opt);
    c.use_moe = false;  // phase 1 trains plain DDQN on both sides by protocol
    fs::create_directories(opt.out_dir);
    const TrainHooks hooks = checkpoint_hooks(c, opt, "good_agent", "adversary");
    AliResult res = run_ali(c, hooks);
    emit_checkpoint(join(opt.out_dir, "good_agent.ckpt"), c, "good",
                    PolicyNet(std::move(res.good)), opt.json_export);
    emit_checkpoint(join(opt.out_dir, "adversary.ckpt"), c, "adversary",
                    PolicyNet(std::move(res.adversary)), opt.json_export);
    write_metrics(opt, scenario_name(c.scenario), res.episodes);
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int cmd_train_main(const CliOptions& opt, const std::string& opponent_checkpoint) {
  try {
    RunConfig c = resolve_config(opt);
    Checkpoint opp = load_checkpoint(opponent_checkpoint);
    if (opp.config.scenario != c.scenario) {
      throw std::runtime_error("opponent checkpoint is for scenario '" +
                               scenario_name(opp.config.scenario) +
                               "' but the config says '" + scenario_name(c.scenario) + "'");
    }
    const bool primary_good = c.primary_is_good();
    const std::string needed = primary_good ? "adversary" : "good";
    if (opp.role != needed) {
      throw std::runtime_error("opponent checkpoint has role '" + opp.role +
                               "' but this scenario freezes the " + needed);
    }
    fs::create_directories(opt.out_dir);
    const TrainHooks hooks = checkpoint_hooks(c, opt, "primary", "primary");
    TrainResult res = train_vs_fixed(c, opp.net, hooks);
    emit_checkpoint(join(opt.out_dir, "primary.ckpt"), c, primary_good ? "good" : "adversary",
                    std::move(res.primary), opt.json_export);
    write_metrics(opt, scenario_name(c.scenario), res.episodes);
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int cmd_eval(const CliOptions& opt, const std::string& checkpoint_a,
             const std::string& checkpoint_b) {
  try {
    Checkpoint ca = load_checkpoint(checkpoint_a);
    Checkpoint cb = load_checkpoint(checkpoint_b);
    if (ca.config.scenario != cb.config.scenario) {
      throw std::runtime_error("checkpoints disagree on the scenario: '" +
                               scenario_name(ca.config.scenario) + "' vs '" +
                               scenario_name(cb.config.scenario) + "'");
    }
    if (ca.role == cb.role) {
      throw std::runtime_error("need one good-agent and one adversary checkpoint, got two '" +
                               ca.role + "'");
    }
    Checkpoint& good = ca.role == "good" ? ca : cb;
    Checkpoint& adv = ca.role == "good" ? cb : ca;

    const bool primary_good = good.config.primary_is_good();
    RunConfig c = opt.config_path.empty() ? (primary_good ? good.config : adv.config)
                                          : resolve_config(opt);
    if (!opt.config_path.empty() && c.scenario != good.config.scenario) {
      throw std::runtime_error("config scenario '" + scenario_name(c.scenario) +
                               "' does not match the checkpoints ('" +
                               scenario_name(good.config.scenario) + "')");
    }
    if (opt.seed) c.seed = *opt.seed;

    fs::create_directories(opt.out_dir);
    std::vector<TrajectoryRow> rows;
    EvalStats st = evaluate(good.net, adv.net, c, opt.dump_trajectories ? &rows : nullptr);
    const PolicyNet& primary = primary_good ? good.net : adv.net;
    const std::string algorithm = primary.is_moe() ? "ddqn-moe" : "ddqn";
    write_file(join(opt.out_dir, "eval_stats.csv"), eval_stats_csv({{algorithm, st}}));
    write_file(join(opt.out_dir, "eval_episodes.csv"), eval_episodes_csv(st));
    if (opt.dump_trajectories) {
      write_file(join(opt.out_dir, "trajectories.csv"), trajectories_csv(rows));
    }
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int cmd_show_config(const std::string& scenario, const std::string& preset) {
  try {
    const std::string text = config_to_text(preset_config(parse_scenario(scenario), preset));
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

}  // namespace moeq
