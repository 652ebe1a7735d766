#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "curio/nn/layers.hpp"
#include "curio/nn/tensor.hpp"

namespace curio::intrinsic {

/// Flat (s, a, s') records. Row r of a rollout with E environments is
/// (step r / E, env r % E); step_index carries the step for colored noise.
struct TransitionBatch {
  std::size_t obs_size = 0;
  std::vector<double> obs;
  std::vector<double> next_obs;
  std::vector<std::size_t> actions;
  std::vector<std::size_t> step_index;

  std::size_t size() const { return actions.size(); }
  void add(std::span<const double> s, std::size_t action, std::span<const double> s_next, std::size_t step);

  nn::Tensor obs_tensor() const;
  nn::Tensor next_obs_tensor() const;
  TransitionBatch subset(std::span<const std::size_t> rows) const;
};

struct IntrinsicLosses {
  double recon = 0.0;
  double kl = 0.0;
  double inverse = 0.0;
  double forward = 0.0;
  double distill = 0.0;
};

/// Uniform surface over TeCLE, ICM, RND and the no-bonus baseline.
/// compute_rewards is read-only on parameters; update takes one optimizer
/// step per owned objective.
class IntrinsicModule {
 public:
  virtual ~IntrinsicModule() = default;

  virtual std::string name() const = 0;
  /// Called once before each rollout of `length` steps.
  virtual void begin_rollout(std::uint64_t rollout_index, std::size_t length) {
    (void)rollout_index;
    (void)length;
  }
  virtual std::vector<double> compute_rewards(const TransitionBatch& batch) const = 0;
  virtual IntrinsicLosses update(const TransitionBatch& batch) = 0;
  virtual nn::ParamList parameters() const = 0;
};

class NoBonus final : public IntrinsicModule {
 public:
  std::string name() const override { return "none"; }
  std::vector<double> compute_rewards(const TransitionBatch& batch) const override {
    return std::vector<double>(batch.size(), 0.0);
  }
  IntrinsicLosses update(const TransitionBatch&) override { return {}; }
  nn::ParamList parameters() const override { return {}; }
};

/// Per-row Euclidean distance between two [B, D] tensors.
std::vector<double> row_distance(const nn::Tensor& a, const nn::Tensor& b);
/// Per-row squared Euclidean distance.
std::vector<double> row_squared_distance(const nn::Tensor& a, const nn::Tensor& b);

enum class Variant { Tecle, Icm, Rnd, None };

Variant parse_variant(const std::string& s);
std::string variant_name(Variant v);

struct IntrinsicConfig {
  Variant variant = Variant::None;
  double beta = 0.0;
  std::uint64_t seed = 1;
  double lr = 1e-3;
};

std::unique_ptr<IntrinsicModule> make_intrinsic(const IntrinsicConfig& config);

}  // namespace curio::intrinsic
