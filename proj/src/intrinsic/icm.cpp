#include "curio/intrinsic/icm.hpp"

#include "curio/error.hpp"
#include "curio/nn/ops.hpp"
#include "curio/seeding.hpp"

namespace curio::intrinsic {

using nn::Tensor;

Icm::Icm(IcmConfig config)
    : config_(config),
      init_rng_(derive_seed(config.seed, {0x1c3})),
      embed_(config.dims, init_rng_),
      inverse_(config.dims, init_rng_),
      forward_(config.dims, init_rng_),
      opt_(nn::tensors_of(parameters()), config.adam) {}

nn::ParamList Icm::parameters() const {
  nn::ParamList p;
  embed_.append_params(p, "embed");
  inverse_.append_params(p, "inverse");
  forward_.append_params(p, "forward");
  return p;
}

std::vector<double> Icm::reward_from_prediction(const Tensor& predicted, const Tensor& actual) {
  auto r = row_squared_distance(predicted, actual);
  for (double& v : r) v *= 0.5;
  return r;
}

std::vector<double> Icm::compute_rewards(const TransitionBatch& batch) const {
  if (batch.size() == 0) return {};
  const Tensor phi = embed_(batch.obs_tensor()).detach();
  const Tensor phi_next = embed_(batch.next_obs_tensor()).detach();
  const Tensor act = nn::one_hot(batch.actions, config_.dims.actions);
  return reward_from_prediction(forward_(phi, act), phi_next);
}

IntrinsicLosses Icm::update(const TransitionBatch& batch) {
  if (batch.size() == 0) throw InvalidInput("icm update: empty batch");
  const Tensor phi = embed_(batch.obs_tensor());
  const Tensor phi_next = embed_(batch.next_obs_tensor());
  const Tensor act = nn::one_hot(batch.actions, config_.dims.actions);

  const Tensor inverse = nn::cross_entropy(inverse_(phi, phi_next), batch.actions);
  const Tensor pred = forward_(phi.detach(), act);
  const double d = static_cast<double>(config_.dims.feature);
  // 0.5 * squared norm per row, averaged over the batch
  const Tensor forward = nn::scale(nn::mse(pred, phi_next.detach()), 0.5 * d);

  opt_.zero_grad();
  Tensor total = nn::add(inverse, forward);
  total.backward();
  opt_.step();
  IntrinsicLosses out;
  out.inverse = inverse.item();
  out.forward = forward.item();
  return out;
}

}  // namespace curio::intrinsic
