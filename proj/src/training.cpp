#include "moeq/training.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moeq {

long long RunConfig::epsilon_decay_steps() const {
  const double steps = epsilon_decay_fraction *
                       static_cast<double>(total_training_episodes) *
                       static_cast<double>(physics.episode_length);
  return std::llround(steps);
}

PerConfig RunConfig::per_config() const {
  PerConfig pc;
  pc.capacity = replay_memory_size;
  pc.alpha = alpha;
  pc.beta0 = beta;
  pc.epsilon = epsilon_per;
  pc.annealing_steps = annealing_steps;
  return pc;
}

int PolicyNet::state_dim() const {
  return is_moe() ? moe().state_dim() : mlp().in_dim();
}

int PolicyNet::num_actions() const {
  return is_moe() ? moe().num_actions() : mlp().out_dim();
}

std::vector<double> PolicyNet::q_values(const std::vector<double>& obs,
                                        const std::vector<double>& opp_features) const {
  if (is_moe()) return moe_forward(moe(), obs, opp_features);
  return mlp_forward(mlp(), obs).out;
}

std::vector<double> rolling_score(const std::vector<double>& rewards, int window) {
  if (window <= 0) throw std::invalid_argument("rolling_score: window must be positive");
  if (rewards.empty()) throw std::invalid_argument("rolling_score: empty input");
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    acc += rewards[i];
    if (i >= static_cast<std::size_t>(window)) acc -= rewards[i - window];
    const double n = std::min<double>(window, static_cast<double>(i + 1));
    out[i] = acc / n;
  }
  return out;
}

namespace {

// One learning side: online/target nets, its replay buffer, and the rng
// streams it owns. The policy rng already seeded the network init, so the
// whole side is a function of one derived seed.
struct Learner {
  PolicyNet online;
  PolicyNet target;
  PerBuffer buffer;
  Rng policy_rng;
  Rng buffer_rng;

  Learner(PolicyNet net, const RunConfig& c, Rng rng, std::uint64_t buffer_stream)
      : online(net), target(std::move(net)), buffer(c.per_config()),
        policy_rng(rng), buffer_rng(derive_seed(c.seed, buffer_stream)) {}

  void sync_target() { target = online; }

  bool ready(const RunConfig& c) const {
    return buffer.size() >= std::max(c.replay_start_size, c.minibatch_size);
  }

  void train(const RunConfig& c) {
    SampleBatch sb = buffer.sample(c.minibatch_size, buffer_rng);
    const BatchResult r =
        online.is_moe()
            ? moe_train_step(online.moe(), target.moe(), sb.transitions, sb.is_weights,
                             c.discount_factor, c.learning_rate, c.double_q)
            : ddqn_train_step(online.mlp(), target.mlp(), sb.transitions, sb.is_weights,
                              c.discount_factor, c.learning_rate, c.double_q);
    buffer.update_priorities(sb.tree_indices, r.td_errors);
  }
};

Learner make_learner(const RunConfig& c, bool good_side, bool moe) {
  Rng rng(derive_seed(c.seed, good_side ? kStreamGood : kStreamAdv));
  const int dim = observation_dim(c.scenario, good_side);
  if (moe) {
    MoeQNetwork net(dim, kNumActions, c.num_experts);
    init_uniform(net, rng);
    return Learner(PolicyNet(std::move(net)), c, rng,
                   good_side ? kStreamGoodBuffer : kStreamAdvBuffer);
  }
  MlpParams net(dim, kPlainHidden1, kPlainHidden2, kNumActions);
  init_uniform(net, rng);
  return Learner(PolicyNet(std::move(net)), c, rng,
                 good_side ? kStreamGoodBuffer : kStreamAdvBuffer);
}

Transition make_transition(const std::vector<double>& obs, int action, double reward,
                           const std::vector<double>& next_obs, bool done, int opp_action,
                           std::vector<double> phi, std::vector<double> phi_next) {
  Transition t;
  t.state = obs;
  t.action = action;
  t.reward = reward;
  t.next_state = next_obs;
  t.done = done;
  t.opponent_action = opp_action;
  t.opponent_features = std::move(phi);
  t.next_opponent_features = std::move(phi_next);
  return t;
}

// The shared episode loop. A null learner on one side means that side plays
// the frozen net eps-greedily with its own rng and never trains.
std::vector<EpisodeRecord> run_loop(const RunConfig& c, Learner* good, Learner* adv,
                                    const PolicyNet* frozen, Rng* frozen_rng,
                                    const TrainHooks& hooks) {
  Rng env_rng(derive_seed(c.seed, kStreamEnv));
  const EpsilonSchedule eps{c.initial_epsilon, c.final_epsilon, c.epsilon_decay_steps()};
  long long env_step = 0;
  std::vector<EpisodeRecord> records;
  records.reserve(c.total_training_episodes);

  // track_for_good summarizes the adversary's actions (it feeds the good
  // side's net) and vice versa.
  OpponentTracker track_for_good, track_for_adv;

  for (int ep = 0; ep < c.total_training_episodes; ++ep) {
    WorldState s = reset_world(c.scenario, env_rng);
    std::vector<double> obs_good = observe(s, c.scenario, true);
    std::vector<double> obs_adv = observe(s, c.scenario, false);
    track_for_good.reset();
    track_for_adv.reset();
    double sum_good = 0.0, sum_adv = 0.0;
    double cur_eps = eps.value(env_step);

    for (int t = 0; t < c.physics.episode_length; ++t) {
      cur_eps = eps.value(env_step);
      const std::vector<double> phi_good = track_for_good.features();
      const std::vector<double> phi_adv = track_for_adv.features();

      const int a_good =
          good ? select_action(good->online.q_values(obs_good, phi_good), cur_eps,
                               good->policy_rng)
               : select_action(frozen->q_values(obs_good, phi_good),
                               c.frozen_opponent_epsilon, *frozen_rng);
      const int a_adv =
          adv ? select_action(adv->online.q_values(obs_adv, phi_adv), cur_eps,
                              adv->policy_rng)
              : select_action(frozen->q_values(obs_adv, phi_adv),
                              c.frozen_opponent_epsilon, *frozen_rng);

      StepOutcome out = step_world(s, static_cast<Action>(a_good),
                                   static_cast<Action>(a_adv), c.scenario, c.physics);
      track_for_good.update(a_adv);
      track_for_adv.update(a_good);

      if (good) {
        good->buffer.push(make_transition(obs_good, a_good, out.reward_good, out.obs_good,
                                          out.done, a_adv, phi_good,
                                          track_for_good.features()));
      }
      if (adv) {
        adv->buffer.push(make_transition(obs_adv, a_adv, out.reward_adversary,
                                         out.obs_adversary, out.done, a_good, phi_adv,
                                         track_for_adv.features()));
      }

      ++env_step;
      for (Learner* l : {good, adv}) {
        if (!l) continue;
        l->buffer.anneal_beta(1);
        if (l->ready(c) && env_step % c.train_frequency == 0) l->train(c);
      }

      sum_good += out.reward_good;
      sum_adv += out.reward_adversary;
      s = std::move(out.next);
      obs_good = std::move(out.obs_good);
      obs_adv = std::move(out.obs_adversary);
    }

    records.push_back({ep, sum_good, sum_adv, c.physics.episode_length, cur_eps});
    if ((ep + 1) % c.target_network_update_frequency == 0) {
      if (good) good->sync_target();
      if (adv) adv->sync_target();
    }
    if (hooks.on_episode_end) {
      hooks.on_episode_end(records.back(), good ? &good->online : nullptr,
                           adv ? &adv->online : nullptr);
    }
  }
  return records;
}

}  // namespace

AliResult run_ali(const RunConfig& config, const TrainHooks& hooks) {
  if (config.use_moe) {
    throw std::invalid_argument("run_ali: phase 1 trains plain DDQN on both sides");
  }
  Learner good = make_learner(config, true, false);
  Learner adv = make_learner(config, false, false);
  std::vector<EpisodeRecord> records = run_loop(config, &good, &adv, nullptr, nullptr, hooks);
  return {std::move(good.online.mlp()), std::move(adv.online.mlp()), std::move(records)};
}

TrainResult train_vs_fixed(const RunConfig& config, const PolicyNet& frozen_opponent,
                           const TrainHooks& hooks) {
  const bool primary_good = config.primary_is_good();
  if (frozen_opponent.state_dim() != observation_dim(config.scenario, !primary_good)) {
    throw std::invalid_argument("train_vs_fixed: frozen net does not fit the opponent role");
  }
  Learner primary = make_learner(config, primary_good, config.use_moe);
  Rng frozen_rng(derive_seed(config.seed, kStreamFrozen));
  std::vector<EpisodeRecord> records =
      primary_good
          ? run_loop(config, &primary, nullptr, &frozen_opponent, &frozen_rng, hooks)
          : run_loop(config, nullptr, &primary, &frozen_opponent, &frozen_rng, hooks);
  return {std::move(primary.online), std::move(records)};
}

EvalStats evaluate(const PolicyNet& good, const PolicyNet& adversary,
                   const RunConfig& config, std::vector<TrajectoryRow>* trajectories) {
  if (good.state_dim() != observation_dim(config.scenario, true) ||
      adversary.state_dim() != observation_dim(config.scenario, false)) {
    throw std::invalid_argument("evaluate: network does not fit its role");
  }
  const int n = config.total_testing_episodes;
  if (n <= 0) throw std::invalid_argument("evaluate: need at least one episode");

  std::vector<EpisodeRecord> episodes(n);
  std::vector<std::vector<TrajectoryRow>> rows(trajectories ? n : 0);
  const std::uint64_t eval_seed = derive_seed(config.seed, kStreamEval);

  // Episodes are independent given their derived seeds; the loop body never
  // touches shared state, so the fan-out is safe and order-free.
#pragma omp parallel for schedule(static)
  for (int e = 0; e < n; ++e) {
    Rng env_rng(derive_seed(eval_seed, static_cast<std::uint64_t>(e)));
    WorldState s = reset_world(config.scenario, env_rng);
    std::vector<double> obs_good = observe(s, config.scenario, true);
    std::vector<double> obs_adv = observe(s, config.scenario, false);
    OpponentTracker track_for_good, track_for_adv;
    double sum_good = 0.0, sum_adv = 0.0;
    for (int t = 0; t < config.physics.episode_length; ++t) {
      const int a_good = argmax_action(good.q_values(obs_good, track_for_good.features()));
      const int a_adv =
          argmax_action(adversary.q_values(obs_adv, track_for_adv.features()));
      StepOutcome out = step_world(s, static_cast<Action>(a_good),
                                   static_cast<Action>(a_adv), config.scenario,
                                   config.physics);
      track_for_good.update(a_adv);
      track_for_adv.update(a_good);
      sum_good += out.reward_good;
      sum_adv += out.reward_adversary;
      if (trajectories) {
        rows[e].push_back({e, t, out.next.agent_pos.x, out.next.agent_pos.y,
                           out.next.adversary_pos.x, out.next.adversary_pos.y, a_good,
                           a_adv, out.reward_good, out.reward_adversary});
      }
      s = std::move(out.next);
      obs_good = std::move(out.obs_good);
      obs_adv = std::move(out.obs_adversary);
    }
    episodes[e] = {e, sum_good, sum_adv, config.physics.episode_length, 0.0};
  }

  EvalStats st;
  st.mean_good = st.mean_adv = 0.0;
  st.max_good = episodes[0].reward_good;
  st.max_adv = episodes[0].reward_adv;
  for (const EpisodeRecord& r : episodes) {
    st.mean_good += r.reward_good;
    st.mean_adv += r.reward_adv;
    st.max_good = std::max(st.max_good, r.reward_good);
    st.max_adv = std::max(st.max_adv, r.reward_adv);
  }
  st.mean_good /= n;
  st.mean_adv /= n;
  st.episodes = std::move(episodes);
  if (trajectories) {
    for (int e = 0; e < n; ++e) {
      trajectories->insert(trajectories->end(), rows[e].begin(), rows[e].end());
    }
  }
  return st;
}

}  // namespace moeq
