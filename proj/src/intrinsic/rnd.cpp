#include "curio/intrinsic/rnd.hpp"

#include "curio/error.hpp"
#include "curio/nn/ops.hpp"
#include "curio/seeding.hpp"

namespace curio::intrinsic {

using nn::Tensor;

Rnd::Rnd(RndConfig config)
    : config_(config),
      init_rng_(derive_seed(config.seed, {0x52d})),
      target_(config.dims, init_rng_, false),
      predictor_(config.dims, init_rng_, true),
      opt_(nn::tensors_of(predictor_params()), config.adam) {}

nn::ParamList Rnd::predictor_params() const {
  nn::ParamList p;
  predictor_.append_params(p, "predictor");
  return p;
}

nn::ParamList Rnd::target_params() const {
  nn::ParamList p;
  target_.append_params(p, "target");
  return p;
}

nn::ParamList Rnd::parameters() const {
  nn::ParamList p = predictor_params();
  for (auto& q : target_params()) p.push_back(std::move(q));
  return p;
}

std::vector<double> Rnd::compute_rewards(const TransitionBatch& batch) const {
  if (batch.size() == 0) return {};
  const Tensor x = batch.next_obs_tensor();
  return row_squared_distance(predictor_(x), target_(x));
}

IntrinsicLosses Rnd::update(const TransitionBatch& batch) {
  if (batch.size() == 0) throw InvalidInput("rnd update: empty batch");
  const Tensor x = batch.next_obs_tensor();
  opt_.zero_grad();
  Tensor loss = nn::mse(predictor_(x), target_(x));
  loss.backward();
  opt_.step();
  IntrinsicLosses out;
  out.distill = loss.item();
  return out;
}

}  // namespace curio::intrinsic
