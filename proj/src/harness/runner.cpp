#include "curio/harness/runner.hpp"

#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>

#include "curio/agent/gae.hpp"
#include "curio/error.hpp"
#include "curio/nn/checkpoint.hpp"
#include "curio/seeding.hpp"

namespace curio::harness {

namespace {

// Seed-derivation path tags.
constexpr std::uint64_t kPolicyTag = 1;
constexpr std::uint64_t kPpoTag = 2;
constexpr std::uint64_t kIntrinsicTag = 3;
constexpr std::uint64_t kWrapperTag = 4;
constexpr std::uint64_t kResetTag = 5;
constexpr std::uint64_t kActTag = 6;

nn::Tensor stack_obs(const std::vector<env::Observation>& obs) {
  std::vector<double> flat;
  flat.reserve(obs.size() * env::kObsSize);
  for (const auto& o : obs) flat.insert(flat.end(), o.begin(), o.end());
  return nn::Tensor::from({obs.size(), env::kObsSize}, std::move(flat));
}

env::CoverageMap coverage_for(const ExperimentConfig& config) {
  const auto gc = env::grid_config_for(config.env.id);
  return env::CoverageMap(gc.size, gc.size);
}

}  // namespace

Trainer::Trainer(const ExperimentConfig& config, std::uint64_t seed)
    : config_(config),
      seed_(seed),
      policy_(agent::PolicyDims{}, derive_seed(seed, {kPolicyTag})),
      ppo_(policy_, config.ppo, derive_seed(seed, {kPpoTag})),
      intrinsic_(intrinsic::make_intrinsic(
          {config.variant, config.beta.value_or(0.0), derive_seed(seed, {kIntrinsicTag}), config.ppo.lr})),
      normalizer_(config.gamma_i, config.num_envs),
      episode_return_(config.num_envs, 0.0),
      episode_count_(config.num_envs, 0),
      coverage_(coverage_for(config)),
      act_rng_(derive_seed(seed, {kActTag})) {
  config_.validate();
  envs_.reserve(config_.num_envs);
  obs_.resize(config_.num_envs);
  for (std::size_t e = 0; e < config_.num_envs; ++e) {
    envs_.push_back(env::make_env(config_.env, derive_seed(seed, {kWrapperTag, e})));
    reset_env(e);
  }
}

void Trainer::reset_env(std::size_t e) {
  obs_[e] = envs_[e]->reset(derive_seed(seed_, {kResetTag, e, episode_count_[e]}));
  episode_return_[e] = 0.0;
  coverage_.record(envs_[e]->agent_position());
}

MetricsRow Trainer::run_rollout(RolloutRecord* record) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t K = config_.rollout_length;
  const std::size_t E = config_.num_envs;
  const std::size_t N = K * E;

  intrinsic_->begin_rollout(rollouts_, K);

  intrinsic::TransitionBatch transitions;
  transitions.obs_size = env::kObsSize;
  transitions.obs.reserve(N * env::kObsSize);
  transitions.next_obs.reserve(N * env::kObsSize);
  std::vector<double> env_rewards(N), log_probs(N), values_e(N), values_i(N);
  std::vector<std::uint8_t> dones(N);
  std::vector<double> finished;

  for (std::size_t t = 0; t < K; ++t) {
    const auto samples = agent::select_actions(policy_, stack_obs(obs_), act_rng_);
    for (std::size_t e = 0; e < E; ++e) {
      const std::size_t row = t * E + e;
      const auto& s = samples[e];
      auto result = envs_[e]->step(env::action_from_index(s.action));
      transitions.add(obs_[e], s.action, result.observation, t);
      env_rewards[row] = result.reward;
      log_probs[row] = s.log_prob;
      values_e[row] = s.value_e;
      values_i[row] = s.value_i;
      dones[row] = result.done() ? 1 : 0;
      episode_return_[e] += result.reward;
      if (result.done()) {
        returns_.push(episode_return_[e]);
        finished.push_back(episode_return_[e]);
        ++episode_count_[e];
        reset_env(e);
      } else {
        obs_[e] = std::move(result.observation);
        coverage_.record(envs_[e]->agent_position());
      }
    }
  }

  // Rewards use the parameters from before this rollout's updates.
  const std::vector<double> raw = intrinsic_->compute_rewards(transitions);
  const std::vector<double> r_int = normalizer_.normalize(raw);
  std::vector<double> r_ext = env_rewards;
  if (config_.zero_extrinsic) std::fill(r_ext.begin(), r_ext.end(), 0.0);

  const auto boot = policy_.forward(stack_obs(obs_));
  std::vector<double> adv_e(N), adv_i(N), ret_e(N), ret_i(N);
  std::vector<double> re(K), ri(K), ve(K), vi(K);
  std::vector<std::uint8_t> d(K);
  for (std::size_t e = 0; e < E; ++e) {
    for (std::size_t t = 0; t < K; ++t) {
      const std::size_t row = t * E + e;
      re[t] = r_ext[row];
      ri[t] = r_int[row];
      ve[t] = values_e[row];
      vi[t] = values_i[row];
      d[t] = dones[row];
    }
    const auto ext = agent::gae(re, ve, boot.value_e[e], d, config_.gamma_e, config_.lambda, true);
    const auto in = agent::gae(ri, vi, boot.value_i[e], d, config_.gamma_i, config_.lambda, false);
    for (std::size_t t = 0; t < K; ++t) {
      const std::size_t row = t * E + e;
      adv_e[row] = ext.advantages[t];
      ret_e[row] = ext.returns[t];
      adv_i[row] = in.advantages[t];
      ret_i[row] = in.returns[t];
    }
  }

  agent::PpoBatch batch;
  batch.obs_size = env::kObsSize;
  batch.obs = transitions.obs;
  batch.actions = transitions.actions;
  batch.old_log_prob = std::move(log_probs);
  batch.advantages = agent::standardize(agent::combine(adv_e, adv_i));
  batch.returns_e = std::move(ret_e);
  batch.returns_i = std::move(ret_i);

  intrinsic::IntrinsicLosses losses;
  std::size_t intrinsic_updates = 0;
  // The intrinsic module trains on exactly the rows of each PPO minibatch.
  const auto report = ppo_.update(batch, [&](std::span<const std::size_t> rows) {
    const auto l = intrinsic_->update(transitions.subset(rows));
    losses.recon += l.recon;
    losses.kl += l.kl;
    losses.inverse += l.inverse;
    losses.forward += l.forward;
    losses.distill += l.distill;
    ++intrinsic_updates;
  });

  frames_ += N;
  ++rollouts_;

  MetricsRow row;
  row.frame = frames_;
  row.seed = seed_;
  row.mean_return = returns_.mean();
  row.mean_intrinsic = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(N);
  row.loss_policy = report.policy_loss;
  row.loss_value = report.value_loss;
  if (intrinsic_updates > 0) {
    const double k = static_cast<double>(intrinsic_updates);
    // The recon column carries each module's prediction loss: CVAE
    // reconstruction, ICM forward error or RND distillation error.
    row.loss_recon = (losses.recon + losses.forward + losses.distill) / k;
    row.loss_kl = losses.kl / k;
    row.loss_inverse = losses.inverse / k;
  }
  row.entropy = report.entropy;
  if (config_.record_wallclock)
    row.wallclock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (record) {
    record->seed = seed_;
    record->rollout_index = rollouts_ - 1;
    record->actions = transitions.actions;
    record->env_rewards = std::move(env_rewards);
    record->learner_rewards = std::move(r_ext);
    record->intrinsic_raw = raw;
    record->intrinsic_normalized = r_int;
    record->dones = std::move(dones);
    record->finished_returns = std::move(finished);
  }
  return row;
}

void Trainer::save_checkpoints(const std::filesystem::path& run_dir) const {
  nn::save_checkpoint(policy_checkpoint_path(run_dir, seed_), policy_.parameters());
  nn::save_checkpoint(intrinsic_checkpoint_path(run_dir, seed_), intrinsic_->parameters());
}

std::filesystem::path policy_checkpoint_path(const std::filesystem::path& run_dir, std::uint64_t seed) {
  return run_dir / "ckpt" / ("seed" + std::to_string(seed) + "_policy.ckpt");
}

std::filesystem::path intrinsic_checkpoint_path(const std::filesystem::path& run_dir, std::uint64_t seed) {
  return run_dir / "ckpt" / ("seed" + std::to_string(seed) + "_intrinsic.ckpt");
}

std::filesystem::path coverage_counts_path(const std::filesystem::path& run_dir) {
  return run_dir / "ckpt" / "coverage_counts.csv";
}

void write_coverage_counts(const std::filesystem::path& path, const env::CoverageMap& map) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "width,height\n" << map.width() << "," << map.height() << "\nx,y,count\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) os << x << "," << y << "," << map.count({x, y}) << "\n";
  }
}

env::CoverageMap read_coverage_counts(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot open coverage counts " + path.string());
  std::string line;
  int w = 0, h = 0;
  char comma = 0;
  if (!std::getline(is, line) || line != "width,height" || !std::getline(is, line))
    throw InvalidInput("malformed coverage counts header in " + path.string());
  std::istringstream dims(line);
  if (!(dims >> w >> comma >> h) || comma != ',' || w <= 0 || h <= 0)
    throw InvalidInput("malformed coverage dimensions in " + path.string());
  env::CoverageMap map(w, h);
  if (!std::getline(is, line) || line != "x,y,count") throw InvalidInput("malformed coverage counts in " + path.string());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    int x = 0, y = 0;
    std::uint64_t n = 0;
    char c1 = 0, c2 = 0;
    if (!(cells >> x >> c1 >> y >> c2 >> n) || c1 != ',' || c2 != ',')
      throw InvalidInput("malformed coverage row '" + line + "'");
    map.set_count({x, y}, n);
  }
  return map;
}

RunResult run(const ExperimentConfig& config, const RunHooks& hooks, bool write_files) {
  config.validate();
  RunResult result;
  result.run_dir = config.run_dir();

  std::unique_ptr<MetricsWriter> writer;
  if (write_files) {
    std::filesystem::create_directories(result.run_dir / "ckpt");
    std::ofstream(result.run_dir / "config.txt") << format_config(config);
    writer = std::make_unique<MetricsWriter>(result.run_dir / "metrics.csv");
  }

  env::CoverageMap total = coverage_for(config);
  for (std::uint64_t seed : config.seeds) {
    Trainer trainer(config, seed);
    for (std::uint64_t i = 0; i < config.num_rollouts(); ++i) {
      MetricsRow row;
      RolloutRecord record;
      try {
        row = trainer.run_rollout(hooks.on_rollout ? &record : nullptr);
      } catch (const std::exception& e) {
        throw std::runtime_error("rollout " + std::to_string(i) + " (seed " + std::to_string(seed) +
                                 ") failed: " + e.what());
      }
      if (hooks.on_rollout) hooks.on_rollout(record);
      if (hooks.on_row) hooks.on_row(row);
      if (writer) writer->append(row);
      result.rows.push_back(row);
    }
    const auto& cov = trainer.coverage();
    for (int y = 0; y < cov.height(); ++y) {
      for (int x = 0; x < cov.width(); ++x) total.set_count({x, y}, total.count({x, y}) + cov.count({x, y}));
    }
    if (write_files) trainer.save_checkpoints(result.run_dir);
  }

  if (write_files) {
    total.write_csv(result.run_dir / "heatmap.csv");
    total.write_pgm(result.run_dir / "heatmap.pgm");
    write_coverage_counts(coverage_counts_path(result.run_dir), total);
  }
  return result;
}

EvalResult evaluate(const agent::PolicyNet& policy, const env::EnvSpec& spec, std::size_t episodes,
                    std::uint64_t seed, bool greedy) {
  if (episodes == 0) throw InvalidInput("evaluate: need at least one episode");
  auto world = env::make_env(spec, derive_seed(seed, {kWrapperTag}));
  std::mt19937_64 rng(derive_seed(seed, {kActTag}));
  EvalResult out;
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    env::Observation obs = world->reset(derive_seed(seed, {kResetTag, ep}));
    double total = 0.0;
    for (;;) {
      const auto sample =
          agent::select_actions(policy, nn::Tensor::from({1, env::kObsSize}, obs), rng, greedy).front();
      auto step = world->step(env::action_from_index(sample.action));
      total += step.reward;
      if (step.done()) break;
      obs = std::move(step.observation);
    }
    out.returns.push_back(total);
  }
  out.mean_return = std::accumulate(out.returns.begin(), out.returns.end(), 0.0) / static_cast<double>(episodes);
  return out;
}

}  // namespace curio::harness
