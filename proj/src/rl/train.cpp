#include "diaster/rl/train.hpp"

#include <algorithm>
#include <stdexcept>

#include "diaster/rd/cuts.hpp"
#include "diaster/rd/train_kernels.hpp"
#include "diaster/rl/evaluate.hpp"

namespace diaster::rl {

namespace {

using harness::ExperimentConfig;
using harness::MetricsRecord;
using rd::Method;

double epsilon_at(const ExperimentConfig& cfg, int episode) {
  const double span = cfg.eps_decay_frac * cfg.episodes;
  if (span <= 0.0) return cfg.eps_end;
  const double frac = std::min(1.0, episode / span);
  return cfg.eps_start + frac * (cfg.eps_end - cfg.eps_start);
}

// m distinct cuts adapted to the episode's actual length. The widened
// support draws the degenerate whole-trajectory case with probability 1/len
// (for m = 1 this is exactly uniform sampling over {0,...,T-1}; a cut at 0
// and the cutless residual coincide because the empty segment scores 0),
// which also anchors R_sub(tau_{0:T}) to R_ep during training.
std::vector<int> draw_cuts(const ExperimentConfig& cfg, int len, nn::Rng& rng) {
  const int m_eff = std::min(cfg.m, len - 1);
  if (m_eff <= 0) return {};
  if (cfg.cut_include_zero && nn::uniform_int(rng, 0, len - 1) == 0) return {};
  return rd::sample_cut_points(len, m_eff, rng);
}

}  // namespace

TrainOutput train_loop(const ExperimentConfig& cfg, uint64_t seed, const harness::MetricsSink& sink,
                       bool parallel) {
  cfg.validate();
  env::EnvInstance env = cfg.make_env();
  const int n_states = env.n_states();
  const int n_actions = env.n_actions();

  TrainOutput out;
  out.models.method = cfg.method;
  const rd::SaEncoder psi_enc(n_states, n_actions, cfg.psi_state_only);
  const rd::SaEncoder sa_enc(n_states, n_actions, false);

  nn::Rng psi_rng = nn::make_rng(nn::derive_seed(seed, "init.psi"));
  nn::Rng phi_rng = nn::make_rng(nn::derive_seed(seed, "init.phi"));
  nn::Rng agent_rng = nn::make_rng(nn::derive_seed(seed, "init.agent"));
  nn::Rng explore_rng = nn::make_rng(nn::derive_seed(seed, "explore"));
  nn::Rng sample_rng = nn::make_rng(nn::derive_seed(seed, "sample"));
  nn::Rng cut_rng = nn::make_rng(nn::derive_seed(seed, "cuts"));

  const bool uses_psi = cfg.method == Method::kDiaster || cfg.method == Method::kDiasterNoStep;
  const bool uses_phi = cfg.method == Method::kDiaster;
  if (uses_psi)
    out.models.psi = std::make_unique<rd::SubTrajModel>(psi_enc, cfg.gru_hidden, psi_rng);
  if (uses_phi)
    out.models.phi = std::make_unique<rd::StepRewardModel>(
        sa_enc, cfg.dense_hidden, phi_rng, cfg.step_time_feature, env.horizon());
  if (cfg.method == Method::kRudderLite)
    out.models.rudder = std::make_unique<rd::RudderModel>(psi_enc, cfg.gru_hidden, psi_rng);
  if (cfg.method == Method::kRrd)
    out.models.rrd_phi = std::make_unique<rd::StepRewardModel>(
        sa_enc, cfg.dense_hidden, phi_rng, cfg.step_time_feature, env.horizon());

  std::unique_ptr<nn::Adam> psi_opt, phi_opt, rudder_opt, rrd_opt;
  const nn::AdamConfig adam_cfg{.learning_rate = cfg.lr};
  if (out.models.psi) psi_opt = std::make_unique<nn::Adam>(out.models.psi->params(), adam_cfg);
  if (out.models.phi) phi_opt = std::make_unique<nn::Adam>(out.models.phi->params(), adam_cfg);
  if (out.models.rudder) rudder_opt = std::make_unique<nn::Adam>(out.models.rudder->params(), adam_cfg);
  if (out.models.rrd_phi) rrd_opt = std::make_unique<nn::Adam>(out.models.rrd_phi->params(), adam_cfg);

  if (cfg.agent == "tabular") {
    out.qtable = std::make_unique<QTable>(
        n_states, n_actions, QTableConfig{cfg.q_lr, cfg.gamma, cfg.q_init});
  } else {
    out.agent = std::make_unique<NeuralQAgent>(
        n_states, n_actions,
        DqnConfig{cfg.agent_hidden, cfg.gamma, cfg.lr, 0.005}, agent_rng);
  }
  const auto greedy = [&](int s, int) {
    return out.qtable ? out.qtable->greedy_action(s) : out.agent->greedy_action(s);
  };

  ReplayBuffer buffer(static_cast<size_t>(cfg.buffer_capacity));

  std::optional<double> last_decomp_loss, last_step_loss, last_td_loss;
  long next_eval_at = 0;
  int eval_index = 0;

  const auto maybe_evaluate = [&](int episode) {
    while (out.env_steps >= next_eval_at) {
      const double mean_return =
          evaluate_policy(env, greedy, cfg.eval_episodes,
                          nn::derive_seed(seed, "eval", static_cast<uint64_t>(eval_index)), parallel);
      MetricsRecord rec;
      rec.wall_step = out.wall_steps;
      rec.env_step = out.env_steps;
      rec.episode = episode;
      rec.mean_return = mean_return;
      rec.decomp_loss = last_decomp_loss;
      rec.step_loss = last_step_loss;
      rec.td_loss = last_td_loss;
      rec.method = rd::method_name(cfg.method);
      rec.seed = seed;
      out.metrics.push_back(rec);
      if (sink) sink(rec);
      out.final_eval = mean_return;
      ++eval_index;
      next_eval_at += cfg.eval_interval;
    }
  };

  maybe_evaluate(0);

  for (int episode = 0; episode < cfg.episodes; ++episode) {
    // ---- collect one trajectory with the exploration policy
    const double eps = epsilon_at(cfg, episode);
    int s = env.reset(nn::derive_seed(seed, "episode", static_cast<uint64_t>(episode)));
    while (!env.done()) {
      const int a = out.qtable ? out.qtable->epsilon_greedy(s, eps, explore_rng)
                               : out.agent->epsilon_greedy(s, eps, explore_rng);
      s = env.step(a).first;
    }
    Trajectory traj = env.episode();
    traj.episodic_return = env.finish_episode();
    out.env_steps += traj.length();
    buffer.push(std::move(traj));

    // ---- M update batches
    for (int b = 0; b < cfg.batches_per_episode; ++b) {
      const int B = cfg.batch_size;

      if (out.models.psi) {
        std::vector<const Trajectory*> batch(B);
        std::vector<std::vector<int>> cuts(B);
        for (int i = 0; i < B; ++i) {
          batch[i] = &buffer.sample_trajectory(sample_rng);
          cuts[i] = draw_cuts(cfg, batch[i]->length(), cut_rng);
        }
        last_decomp_loss = rd::psi_batch_grad(*out.models.psi, batch, cuts, parallel);
        psi_opt->step();
      }
      if (out.models.phi) {
        std::vector<const Trajectory*> batch(B);
        std::vector<int> steps(B);
        for (int i = 0; i < B; ++i) {
          batch[i] = &buffer.sample_trajectory(sample_rng);
          steps[i] = nn::uniform_int(sample_rng, 0, batch[i]->length() - 1);
        }
        last_step_loss = rd::phi_batch_grad(*out.models.phi, *out.models.psi, batch, steps, parallel);
        phi_opt->step();
      }
      if (out.models.rudder) {
        std::vector<const Trajectory*> batch(B);
        for (int i = 0; i < B; ++i) batch[i] = &buffer.sample_trajectory(sample_rng);
        last_decomp_loss = rd::rudder_batch_grad(*out.models.rudder, batch, parallel);
        rudder_opt->step();
      }
      if (out.models.rrd_phi) {
        std::vector<const Trajectory*> batch(B);
        std::vector<std::vector<int>> subsets(B);
        for (int i = 0; i < B; ++i) {
          batch[i] = &buffer.sample_trajectory(sample_rng);
          const int len = batch[i]->length();
          const int k = std::min(cfg.rrd_k, len);
          // uniform k-subset of steps, sorted
          std::vector<int> pool(len);
          for (int t = 0; t < len; ++t) pool[t] = t;
          for (int j = 0; j < k; ++j)
            std::swap(pool[j], pool[nn::uniform_int(sample_rng, j, len - 1)]);
          subsets[i].assign(pool.begin(), pool.begin() + k);
          std::sort(subsets[i].begin(), subsets[i].end());
        }
        last_decomp_loss = rd::rrd_batch_grad(*out.models.rrd_phi, batch, subsets, parallel);
        rrd_opt->step();
      }

      // ---- agent update on freshly relabeled transitions
      std::vector<RelabeledTransition> agent_batch(B);
      for (int i = 0; i < B; ++i) {
        const auto ref = buffer.sample_transition(sample_rng);
        const Trajectory& tau = *ref.traj;
        agent_batch[i] = {tau.states[ref.t], tau.actions[ref.t],
                          rd::relabel_step(out.models, tau, ref.t, buffer.stats()),
                          tau.states[ref.t + 1], ref.t + 1 == tau.length()};
      }
      if (out.qtable) {
        double td_err = 0.0;
        for (const auto& tr : agent_batch) {
          const double bootstrap = tr.done ? 0.0 : cfg.gamma * out.qtable->max_value(tr.s2);
          const double residual = tr.reward + bootstrap - out.qtable->value(tr.s, tr.a);
          td_err += residual * residual;
          out.qtable->update(tr.s, tr.a, tr.reward, tr.s2, tr.done);
        }
        last_td_loss = td_err / B;
      } else {
        last_td_loss = out.agent->update(agent_batch);
      }
      ++out.wall_steps;
    }

    maybe_evaluate(episode + 1);
  }
  return out;
}

}  // namespace diaster::rl
