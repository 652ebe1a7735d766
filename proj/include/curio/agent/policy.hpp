#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "curio/nn/layers.hpp"
#include "curio/nn/tensor.hpp"

namespace curio::agent {

struct PolicyDims {
  std::size_t obs = 686;
  std::size_t hidden = 64;
  std::size_t actions = 7;
};

/// Shared ReLU body with an actor head and two value heads (extrinsic,
/// intrinsic) reading the same features.
class PolicyNet {
 public:
  PolicyNet(PolicyDims dims, std::uint64_t seed);

  struct Output {
    nn::Tensor logits;   // [B, A]
    nn::Tensor value_e;  // [B, 1]
    nn::Tensor value_i;  // [B, 1]
  };
  Output forward(const nn::Tensor& obs) const;

  nn::ParamList parameters() const;
  const PolicyDims& dims() const { return dims_; }

  nn::Linear& actor() { return actor_; }

 private:
  PolicyDims dims_;
  nn::Linear body1_, body2_, actor_, value_e_, value_i_;
};

struct ActionSample {
  std::size_t action = 0;
  double log_prob = 0.0;
  double value_e = 0.0;
  double value_i = 0.0;
};

/// Samples one action per row of obs ([B, obs]); greedy takes the arg-max.
std::vector<ActionSample> select_actions(const PolicyNet& policy, const nn::Tensor& obs, std::mt19937_64& rng,
                                         bool greedy = false);

/// Inverse-CDF draw from a probability row using one uniform variate.
std::size_t sample_categorical(std::span<const double> probs, double u);

}  // namespace curio::agent
