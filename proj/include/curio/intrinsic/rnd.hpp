#pragma once

#include <random>

#include "curio/intrinsic/intrinsic.hpp"
#include "curio/intrinsic/networks.hpp"
#include "curio/nn/adam.hpp"

namespace curio::intrinsic {

struct RndConfig {
  std::uint64_t seed = 1;
  NetDims dims{};
  nn::AdamConfig adam{};
};

/// Random network distillation: reward ||predictor(s') - target(s')||^2 with
/// a frozen randomly initialised target.
class Rnd final : public IntrinsicModule {
 public:
  explicit Rnd(RndConfig config);

  std::string name() const override { return "rnd"; }
  std::vector<double> compute_rewards(const TransitionBatch& batch) const override;
  IntrinsicLosses update(const TransitionBatch& batch) override;
  /// Predictor then target.
  nn::ParamList parameters() const override;

  nn::ParamList predictor_params() const;
  nn::ParamList target_params() const;

 private:
  RndConfig config_;
  std::mt19937_64 init_rng_;
  FeatureMlp target_;
  FeatureMlp predictor_;
  nn::Adam opt_;
};

}  // namespace curio::intrinsic
