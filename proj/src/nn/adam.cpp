#include "curio/nn/adam.hpp"

#include <cmath>

#include "curio/error.hpp"

namespace curio::nn {

AdamState make_adam_state(const std::vector<Tensor>& params, AdamConfig config) {
  AdamState s;
  s.config = config;
  for (const auto& p : params) {
    s.m.emplace_back(p.size(), 0.0);
    s.v.emplace_back(p.size(), 0.0);
  }
  return s;
}

void adam_step(AdamState& state, std::vector<Tensor>& params) {
  if (params.size() != state.m.size()) throw InvalidInput("adam_step: parameter count differs from optimizer state");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i].size() != state.m[i].size()) throw InvalidInput("adam_step: parameter shape differs from optimizer state");

  const auto& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto w = params[i].data();
    auto& m = state.m[i];
    auto& v = state.v[i];
    const bool has = params[i].has_grad();
    const std::span<const double> grad = has ? params[i].grad() : std::span<const double>{};
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double g = has ? grad[j] : 0.0;
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g;
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g * g;
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      w[j] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    }
  }
}

Adam::Adam(std::vector<Tensor> params, AdamConfig config)
    : params_(std::move(params)), state_(make_adam_state(params_, config)) {}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

double clip_grad_norm(std::vector<Tensor>& params, double max_norm) {
  double sq = 0.0;
  for (auto& p : params)
    if (p.has_grad())
      for (double g : p.grad()) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (auto& p : params)
      if (p.has_grad())
        for (double& g : p.grad()) g *= s;
  }
  return norm;
}

}  // namespace curio::nn
