#pragma once

#include <random>

#include "curio/intrinsic/intrinsic.hpp"
#include "curio/intrinsic/networks.hpp"
#include "curio/nn/adam.hpp"

namespace curio::intrinsic {

struct IcmConfig {
  std::uint64_t seed = 1;
  NetDims dims{};
  nn::AdamConfig adam{};
};

/// Forward/inverse dynamics curiosity. Reward is 0.5 * ||h(phi(s), a) - phi(s')||^2.
/// The forward loss sees detached embeddings; the embedding learns from the
/// inverse loss only.
class Icm final : public IntrinsicModule {
 public:
  explicit Icm(IcmConfig config);

  std::string name() const override { return "icm"; }
  std::vector<double> compute_rewards(const TransitionBatch& batch) const override;
  IntrinsicLosses update(const TransitionBatch& batch) override;
  nn::ParamList parameters() const override;

  /// Per-row 0.5 * squared distance.
  static std::vector<double> reward_from_prediction(const nn::Tensor& predicted, const nn::Tensor& actual);

 private:
  IcmConfig config_;
  std::mt19937_64 init_rng_;
  EmbeddingNet embed_;
  InverseNet inverse_;
  ForwardNet forward_;
  nn::Adam opt_;
};

}  // namespace curio::intrinsic
