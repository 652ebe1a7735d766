#include "curio/agent/policy.hpp"

#include <algorithm>
#include <cmath>

#include "curio/nn/ops.hpp"
#include "curio/seeding.hpp"

namespace curio::agent {

using nn::Tensor;

PolicyNet::PolicyNet(PolicyDims dims, std::uint64_t seed)
    : dims_(dims),
      body1_(dims.obs, dims.hidden),
      body2_(dims.hidden, dims.hidden),
      actor_(dims.hidden, dims.actions),
      value_e_(dims.hidden, 1),
      value_i_(dims.hidden, 1) {
  std::mt19937_64 rng(derive_seed(seed, {0x9011c7}));
  const double hidden_gain = std::sqrt(2.0);
  nn::init_orthogonal(body1_, hidden_gain, rng);
  nn::init_orthogonal(body2_, hidden_gain, rng);
  nn::init_orthogonal(actor_, 0.01, rng);
  nn::init_orthogonal(value_e_, 1.0, rng);
  nn::init_orthogonal(value_i_, 1.0, rng);
}

PolicyNet::Output PolicyNet::forward(const Tensor& obs) const {
  const Tensor h = nn::relu(body2_(nn::relu(body1_(obs))));
  return {actor_(h), value_e_(h), value_i_(h)};
}

nn::ParamList PolicyNet::parameters() const {
  nn::ParamList p;
  body1_.append_params(p, "body1");
  body2_.append_params(p, "body2");
  actor_.append_params(p, "actor");
  value_e_.append_params(p, "value_e");
  value_i_.append_params(p, "value_i");
  return p;
}

std::size_t sample_categorical(std::span<const double> probs, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // u landed in the rounding gap above the cumulative sum
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return i;
  return probs.size() - 1;
}

std::vector<ActionSample> select_actions(const PolicyNet& policy, const Tensor& obs, std::mt19937_64& rng,
                                         bool greedy) {
  const auto out = policy.forward(obs);
  const Tensor logp = nn::log_softmax(out.logits);
  const std::size_t rows = logp.rows(), a = logp.cols();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ActionSample> samples(rows);
  std::vector<double> probs(a);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = logp.data().subspan(r * a, a);
    std::size_t chosen = 0;
    if (greedy) {
      chosen = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    } else {
      for (std::size_t j = 0; j < a; ++j) probs[j] = std::exp(row[j]);
      chosen = sample_categorical(probs, unif(rng));
    }
    samples[r] = {chosen, row[chosen], out.value_e[r], out.value_i[r]};
  }
  return samples;
}

}  // namespace curio::agent
