#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "curio/agent/policy.hpp"
#include "curio/nn/adam.hpp"

namespace curio::agent {

struct PpoConfig {
  double clip_low = 0.8;
  double clip_high = 1.2;
  std::size_t epochs = 4;
  std::size_t minibatch = 256;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double lr = 1e-3;
};

/// Flattened rollout ready for optimisation. advantages are the combined,
/// standardized advantages; each value head regresses on its own return.
struct PpoBatch {
  std::size_t obs_size = 0;
  std::vector<double> obs;
  std::vector<std::size_t> actions;
  std::vector<double> old_log_prob;
  std::vector<double> advantages;
  std::vector<double> returns_e;
  std::vector<double> returns_i;

  std::size_t size() const { return actions.size(); }
};

struct PpoLossTerms {
  nn::Tensor policy;   // -mean(min(rho A, clip(rho) A))
  nn::Tensor value;    // mean of 0.5 [(V_e - R_e)^2 + (V_i - R_i)^2]
  nn::Tensor entropy;  // mean policy entropy
  nn::Tensor total;    // policy + value_coef * value - entropy_coef * entropy
};

PpoLossTerms ppo_loss(const PolicyNet& policy, const PpoBatch& batch, std::span<const std::size_t> rows,
                      const PpoConfig& config);

/// Scalar clipped surrogate min(rho A, clip(rho, lo, hi) A).
double clipped_surrogate(double ratio, double advantage, double lo, double hi);

struct PpoReport {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  std::size_t minibatches = 0;
};

class PpoLearner {
 public:
  PpoLearner(PolicyNet& policy, PpoConfig config, std::uint64_t seed);

  /// Runs config.epochs passes of shuffled minibatches with one Adam step
  /// each. on_minibatch, if set, runs after every policy step with the
  /// minibatch's row indices.
  PpoReport update(const PpoBatch& batch,
                   const std::function<void(std::span<const std::size_t>)>& on_minibatch = {});

  const PpoConfig& config() const { return config_; }
  const nn::AdamState& optimizer_state() const { return opt_.state(); }

 private:
  PolicyNet& policy_;
  PpoConfig config_;
  nn::Adam opt_;
  std::mt19937_64 rng_;
};

}  // namespace curio::agent
