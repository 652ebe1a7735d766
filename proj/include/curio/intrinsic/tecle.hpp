#pragma once

// Action-conditioned latent exploration with colored reparameterization noise.
//
// Reward path: phi(s') -> q(z | phi(s'), a) -> z = mu + eps * sigma with eps
// taken from per-latent-dimension colored-noise sequences pre-generated for
// the rollout -> p(phi_hat | z, a); reward is ||phi_hat - phi(s')||_2.
//
// Training path: the embedding f and inverse net g minimise the inverse
// cross-entropy; encoder and decoder minimise reconstruction BCE + KL with
// white-noise reparameterization and detached phi targets, so the colored
// noise never enters the gradient updates.

#include <cstdint>
#include <random>
#include <vector>

#include "curio/intrinsic/intrinsic.hpp"
#include "curio/intrinsic/networks.hpp"
#include "curio/nn/adam.hpp"

namespace curio::intrinsic {

/// noise[j][t]: colored value for latent dimension j at rollout step t.
struct LatentNoise {
  std::vector<std::vector<double>> dims;

  std::size_t latent() const { return dims.size(); }
  std::size_t length() const { return dims.empty() ? 0 : dims.front().size(); }

  static LatentNoise generate(double beta, std::size_t latent, std::size_t length, std::uint64_t base_seed,
                              std::uint64_t rollout_index);
  static LatentNoise zeros(std::size_t latent, std::size_t length);
};

struct TecleConfig {
  double beta = 0.0;
  std::uint64_t seed = 1;
  NetDims dims{};
  nn::AdamConfig adam{};
};

class Tecle final : public IntrinsicModule {
 public:
  explicit Tecle(TecleConfig config);

  std::string name() const override { return "tecle"; }
  void begin_rollout(std::uint64_t rollout_index, std::size_t length) override;
  std::vector<double> compute_rewards(const TransitionBatch& batch) const override;
  IntrinsicLosses update(const TransitionBatch& batch) override;
  nn::ParamList parameters() const override;

  /// Reward with explicit noise; rows read column step_index[r] of noise.
  std::vector<double> rewards_with_noise(const TransitionBatch& batch, const LatentNoise& noise) const;

  nn::Tensor embed(const nn::Tensor& obs) const { return embed_(obs); }
  nn::Tensor inverse_loss(const TransitionBatch& batch) const;

  struct CvaeTerms {
    nn::Tensor recon;  // BCE summed over features, mean over batch
    nn::Tensor kl;
  };
  /// CVAE objective for given targets and explicit reparameterization noise [B, latent].
  CvaeTerms cvae_loss(const nn::Tensor& phi_next, const nn::Tensor& action, const nn::Tensor& eps) const;

  const LatentNoise& rollout_noise() const { return noise_; }
  const TecleConfig& config() const { return config_; }
  const NetDims& dims() const { return config_.dims; }

  nn::ParamList embedding_params() const;
  nn::ParamList cvae_params() const;

  const EmbeddingNet& embedding() const { return embed_; }
  const Encoder& encoder() const { return encoder_; }
  Decoder& decoder() { return decoder_; }

 private:
  TecleConfig config_;
  std::mt19937_64 init_rng_;
  EmbeddingNet embed_;
  InverseNet inverse_;
  Encoder encoder_;
  Decoder decoder_;
  nn::Adam embed_opt_;
  nn::Adam cvae_opt_;
  std::mt19937_64 train_rng_;
  LatentNoise noise_;
};

}  // namespace curio::intrinsic
