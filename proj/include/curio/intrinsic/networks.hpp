#pragma once

#include <cstddef>
#include <random>
#include <string>

#include "curio/nn/layers.hpp"
#include "curio/nn/tensor.hpp"

namespace curio::intrinsic {

struct NetDims {
  std::size_t obs = 686;
  std::size_t hidden = 64;
  std::size_t feature = 32;
  std::size_t latent = 16;
  std::size_t actions = 7;
};

/// Shared state encoder f: obs -> hidden -> feature, sigmoid output in (0,1).
struct EmbeddingNet {
  nn::Linear l1, l2;
  EmbeddingNet(const NetDims& d, std::mt19937_64& rng);
  nn::Tensor operator()(const nn::Tensor& obs) const;
  void append_params(nn::ParamList& out, const std::string& prefix) const;
};

/// Inverse dynamics g: [phi(s), phi(s')] -> action logits.
struct InverseNet {
  nn::Linear l1, l2;
  InverseNet(const NetDims& d, std::mt19937_64& rng);
  nn::Tensor operator()(const nn::Tensor& phi, const nn::Tensor& phi_next) const;
  void append_params(nn::ParamList& out, const std::string& prefix) const;
};

/// Forward dynamics h: [phi(s), onehot(a)] -> predicted phi(s').
struct ForwardNet {
  nn::Linear l1, l2;
  ForwardNet(const NetDims& d, std::mt19937_64& rng);
  nn::Tensor operator()(const nn::Tensor& phi, const nn::Tensor& action) const;
  void append_params(nn::ParamList& out, const std::string& prefix) const;
};

inline constexpr double kLogVarMin = -8.0;
inline constexpr double kLogVarMax = 4.0;

/// Action-conditioned encoder q: [phi(s'), onehot(a)] -> (mu, log sigma^2).
struct Encoder {
  nn::Linear l1, mu_head, log_var_head;
  Encoder(const NetDims& d, std::mt19937_64& rng);
  struct Output {
    nn::Tensor mu;
    nn::Tensor log_var;
  };
  Output operator()(const nn::Tensor& phi_next, const nn::Tensor& action) const;
  void append_params(nn::ParamList& out, const std::string& prefix) const;
};

/// Decoder p: [z, onehot(a)] -> reconstructed phi(s') in (0,1).
struct Decoder {
  nn::Linear l1, l2;
  Decoder(const NetDims& d, std::mt19937_64& rng);
  nn::Tensor operator()(const nn::Tensor& z, const nn::Tensor& action) const;
  void append_params(nn::ParamList& out, const std::string& prefix) const;
};

/// obs -> hidden -> feature with no output squashing (RND target/predictor).
struct FeatureMlp {
  nn::Linear l1, l2;
  FeatureMlp(const NetDims& d, std::mt19937_64& rng, bool trainable);
  nn::Tensor operator()(const nn::Tensor& obs) const;
  void append_params(nn::ParamList& out, const std::string& prefix) const;
};

}  // namespace curio::intrinsic
