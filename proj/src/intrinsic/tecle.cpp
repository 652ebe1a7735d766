#include "curio/intrinsic/tecle.hpp"

#include <cmath>

#include "curio/error.hpp"
#include "curio/noise.hpp"
#include "curio/nn/ops.hpp"
#include "curio/seeding.hpp"

namespace curio::intrinsic {

using nn::Tensor;

LatentNoise LatentNoise::generate(double beta, std::size_t latent, std::size_t length, std::uint64_t base_seed,
                                  std::uint64_t rollout_index) {
  LatentNoise n;
  n.dims.reserve(latent);
  for (std::size_t j = 0; j < latent; ++j) {
    n.dims.push_back(noise::generate(beta, length, derive_seed(base_seed, {rollout_index, j})).values);
  }
  return n;
}

LatentNoise LatentNoise::zeros(std::size_t latent, std::size_t length) {
  LatentNoise n;
  n.dims.assign(latent, std::vector<double>(length, 0.0));
  return n;
}

Tecle::Tecle(TecleConfig config)
    : config_(config),
      init_rng_(derive_seed(config.seed, {0x7ec1e})),
      embed_(config.dims, init_rng_),
      inverse_(config.dims, init_rng_),
      encoder_(config.dims, init_rng_),
      decoder_(config.dims, init_rng_),
      embed_opt_(nn::tensors_of(embedding_params()), config.adam),
      cvae_opt_(nn::tensors_of(cvae_params()), config.adam),
      train_rng_(derive_seed(config.seed, {0x7a1})) {}

nn::ParamList Tecle::embedding_params() const {
  nn::ParamList p;
  embed_.append_params(p, "embed");
  inverse_.append_params(p, "inverse");
  return p;
}

nn::ParamList Tecle::cvae_params() const {
  nn::ParamList p;
  encoder_.append_params(p, "encoder");
  decoder_.append_params(p, "decoder");
  return p;
}

nn::ParamList Tecle::parameters() const {
  nn::ParamList p = embedding_params();
  for (auto& q : cvae_params()) p.push_back(std::move(q));
  return p;
}

void Tecle::begin_rollout(std::uint64_t rollout_index, std::size_t length) {
  noise_ = LatentNoise::generate(config_.beta, config_.dims.latent, length, config_.seed, rollout_index);
}

std::vector<double> Tecle::compute_rewards(const TransitionBatch& batch) const {
  return rewards_with_noise(batch, noise_);
}

std::vector<double> Tecle::rewards_with_noise(const TransitionBatch& batch, const LatentNoise& noise) const {
  const std::size_t rows = batch.size();
  if (rows == 0) return {};
  const std::size_t latent = config_.dims.latent;
  if (noise.latent() != latent) throw InvalidInput("tecle: noise has wrong latent dimensionality");
  for (std::size_t t : batch.step_index) {
    if (t >= noise.length())
      throw InvalidInput("tecle: noise sequence of length " + std::to_string(noise.length()) +
                         " is shorter than the rollout (step " + std::to_string(t) + ")");
  }

  const Tensor phi = embed_(batch.next_obs_tensor()).detach();
  const Tensor act = nn::one_hot(batch.actions, config_.dims.actions);
  const auto post = encoder_(phi, act);

  std::vector<double> z(rows * latent);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < latent; ++j) {
      const std::size_t k = r * latent + j;
      const double sigma = std::exp(0.5 * post.log_var[k]);
      z[k] = post.mu[k] + noise.dims[j][batch.step_index[r]] * sigma;
    }
  }
  const Tensor recon = decoder_(Tensor::from({rows, latent}, std::move(z)), act);

  return row_distance(recon, phi);
}

Tensor Tecle::inverse_loss(const TransitionBatch& batch) const {
  if (batch.size() == 0) throw InvalidInput("inverse_loss: empty batch");
  const Tensor phi = embed_(batch.obs_tensor());
  const Tensor phi_next = embed_(batch.next_obs_tensor());
  return nn::cross_entropy(inverse_(phi, phi_next), batch.actions);
}

Tecle::CvaeTerms Tecle::cvae_loss(const Tensor& phi_next, const Tensor& action, const Tensor& eps) const {
  const auto post = encoder_(phi_next, action);
  const Tensor sigma = nn::exp(nn::scale(post.log_var, 0.5));
  const Tensor z = nn::add(post.mu, nn::mul(eps, sigma));
  const Tensor recon = decoder_(z, action);
  const double d = static_cast<double>(phi_next.cols());
  return {nn::scale(nn::bce(recon, phi_next), d), nn::gaussian_kl(post.mu, post.log_var)};
}

IntrinsicLosses Tecle::update(const TransitionBatch& batch) {
  if (batch.size() == 0) throw InvalidInput("tecle update: empty batch");
  IntrinsicLosses out;

  embed_opt_.zero_grad();
  Tensor li = inverse_loss(batch);
  li.backward();
  embed_opt_.step();
  out.inverse = li.item();

  const Tensor phi_next = embed_(batch.next_obs_tensor()).detach();
  const Tensor act = nn::one_hot(batch.actions, config_.dims.actions);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> eps(batch.size() * config_.dims.latent);
  for (double& e : eps) e = gauss(train_rng_);

  cvae_opt_.zero_grad();
  const auto terms = cvae_loss(phi_next, act, Tensor::from({batch.size(), config_.dims.latent}, std::move(eps)));
  Tensor total = nn::add(terms.recon, terms.kl);
  total.backward();
  cvae_opt_.step();
  out.recon = terms.recon.item();
  out.kl = terms.kl.item();
  return out;
}

}  // namespace curio::intrinsic
