#pragma once

#include <cstdint>
#include <vector>

#include "curio/nn/tensor.hpp"

namespace curio::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::uint64_t step = 0;
};

AdamState make_adam_state(const std::vector<Tensor>& params, AdamConfig config = {});

/// Bias-corrected Adam update reading each parameter's accumulated gradient.
/// Parameters without a gradient buffer are treated as having zero gradient.
void adam_step(AdamState& state, std::vector<Tensor>& params);

class Adam {
 public:
  Adam() = default;
  Adam(std::vector<Tensor> params, AdamConfig config = {});

  void zero_grad();
  void step() { adam_step(state_, params_); }

  const AdamState& state() const { return state_; }
  const std::vector<Tensor>& params() const { return params_; }

 private:
  std::vector<Tensor> params_;
  AdamState state_;
};

/// Scales gradients so their global L2 norm is at most max_norm. Returns the
/// norm before scaling.
double clip_grad_norm(std::vector<Tensor>& params, double max_norm);

}  // namespace curio::nn
