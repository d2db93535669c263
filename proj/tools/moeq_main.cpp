#include <string>

#include <CLI11.hpp>

#include "moeq/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"moeq — two-phase adversarial DDQN training on particle scenarios"};
  app.require_subcommand(1);

  moeq::CliOptions opt;
  std::string opponent, ckpt_a, ckpt_b;
  std::string show_scenario, show_preset = "paper";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "config file (key = value sections)");
    cmd->add_option("--scenario", opt.scenario, "simple_push | simple_adversary");
    cmd->add_option("--preset", opt.preset, "paper | desk (baseline for unset keys)");
    cmd->add_option("--seed", opt.seed, "seed override");
    cmd->add_option("--out", opt.out_dir, "output directory (default: .)");
    cmd->add_flag("--json", opt.json_export, "also write textual .ckpt.json exports");
  };

  CLI::App* ali = app.add_subcommand(
      "train-ali", "phase 1: self-play of two plain DDQN agents; writes both checkpoints");
  add_common(ali);

  CLI::App* main_cmd = app.add_subcommand(
      "train-main", "phase 2: train the primary agent against a frozen opponent checkpoint");
  add_common(main_cmd);
  main_cmd->add_option("opponent", opponent, "frozen opponent checkpoint")->required();

  CLI::App* eval = app.add_subcommand(
      "eval", "greedy test episodes over one good-agent and one adversary checkpoint");
  add_common(eval);
  eval->add_option("checkpoint_a", ckpt_a, "first checkpoint")->required();
  eval->add_option("checkpoint_b", ckpt_b, "second checkpoint")->required();
  eval->add_flag("--dump-trajectories", opt.dump_trajectories,
                 "also write per-step trajectories.csv");

  CLI::App* show = app.add_subcommand("show-config", "print the effective config for a preset");
  show->add_option("scenario", show_scenario, "simple_push | simple_adversary")->required();
  show->add_option("preset", show_preset, "paper | desk (default: paper)");

  CLI11_PARSE(app, argc, argv);

  if (ali->parsed()) return moeq::cmd_train_ali(opt);
  if (main_cmd->parsed()) return moeq::cmd_train_main(opt, opponent);
  if (eval->parsed()) return moeq::cmd_eval(opt, ckpt_a, ckpt_b);
  return moeq::cmd_show_config(show_scenario, show_preset);
}
