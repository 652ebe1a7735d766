#pragma once

// Training driver. Each rollout: pre-generate latent noise, act K steps in
// E environments, score intrinsic rewards with the pre-update parameters,
// normalize them, run extrinsic (episodic) and intrinsic (non-episodic) GAE,
// combine and standardize advantages, then run PPO epochs with the
// intrinsic module updated on every policy minibatch.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "curio/agent/policy.hpp"
#include "curio/agent/ppo.hpp"
#include "curio/env/coverage.hpp"
#include "curio/env/registry.hpp"
#include "curio/harness/config.hpp"
#include "curio/harness/metrics.hpp"
#include "curio/intrinsic/intrinsic.hpp"
#include "curio/intrinsic/reward_normalizer.hpp"

namespace curio::harness {

/// Everything the learner saw for one rollout, row-major [K, E].
struct RolloutRecord {
  std::uint64_t seed = 0;
  std::uint64_t rollout_index = 0;
  std::vector<std::size_t> actions;
  std::vector<double> env_rewards;      // rewards emitted by the environments
  std::vector<double> learner_rewards;  // extrinsic rewards entering GAE
  std::vector<double> intrinsic_raw;
  std::vector<double> intrinsic_normalized;
  std::vector<std::uint8_t> dones;
  std::vector<double> finished_returns;  // episodes completed during the rollout
};

class Trainer {
 public:
  Trainer(const ExperimentConfig& config, std::uint64_t seed);

  /// Collects one rollout and updates every learner. record, when given,
  /// receives the rollout's buffers.
  MetricsRow run_rollout(RolloutRecord* record = nullptr);

  std::uint64_t frames() const { return frames_; }
  std::uint64_t rollouts() const { return rollouts_; }
  std::uint64_t seed() const { return seed_; }

  agent::PolicyNet& policy() { return policy_; }
  intrinsic::IntrinsicModule& intrinsic() { return *intrinsic_; }
  const env::CoverageMap& coverage() const { return coverage_; }

  void save_checkpoints(const std::filesystem::path& dir) const;

 private:
  void reset_env(std::size_t e);

  ExperimentConfig config_;
  std::uint64_t seed_;
  agent::PolicyNet policy_;
  agent::PpoLearner ppo_;
  std::unique_ptr<intrinsic::IntrinsicModule> intrinsic_;
  intrinsic::RewardNormalizer normalizer_;
  std::vector<std::unique_ptr<env::Env>> envs_;
  std::vector<env::Observation> obs_;
  std::vector<double> episode_return_;
  std::vector<std::uint64_t> episode_count_;
  ReturnWindow returns_;
  env::CoverageMap coverage_;
  std::mt19937_64 act_rng_;
  std::uint64_t frames_ = 0;
  std::uint64_t rollouts_ = 0;
};

struct RunHooks {
  std::function<void(const RolloutRecord&)> on_rollout;
  std::function<void(const MetricsRow&)> on_row;
};

struct RunResult {
  std::vector<MetricsRow> rows;
  std::filesystem::path run_dir;
};

/// Trains every seed in turn. With write_files the run directory receives
/// config.txt, metrics.csv, heatmap.csv/.pgm (visits summed over seeds) and
/// per-seed checkpoints under ckpt/.
RunResult run(const ExperimentConfig& config, const RunHooks& hooks = {}, bool write_files = true);

std::filesystem::path policy_checkpoint_path(const std::filesystem::path& run_dir, std::uint64_t seed);
std::filesystem::path intrinsic_checkpoint_path(const std::filesystem::path& run_dir, std::uint64_t seed);
std::filesystem::path coverage_counts_path(const std::filesystem::path& run_dir);

void write_coverage_counts(const std::filesystem::path& path, const env::CoverageMap& map);
env::CoverageMap read_coverage_counts(const std::filesystem::path& path);

struct EvalResult {
  double mean_return = 0.0;
  std::vector<double> returns;
};

/// Runs whole episodes with the given policy. Greedy picks the arg-max action.
EvalResult evaluate(const agent::PolicyNet& policy, const env::EnvSpec& spec, std::size_t episodes,
                    std::uint64_t seed, bool greedy = true);

}  // namespace curio::harness
