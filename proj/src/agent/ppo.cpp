#include "curio/agent/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "curio/error.hpp"
#include "curio/nn/ops.hpp"
#include "curio/seeding.hpp"

namespace curio::agent {

using nn::Tensor;

double clipped_surrogate(double ratio, double advantage, double lo, double hi) {
  return std::min(ratio * advantage, std::clamp(ratio, lo, hi) * advantage);
}

PpoLossTerms ppo_loss(const PolicyNet& policy, const PpoBatch& batch, std::span<const std::size_t> rows,
                      const PpoConfig& config) {
  const std::size_t n = rows.size();
  if (n == 0) throw InvalidInput("ppo_loss: empty minibatch");
  const std::size_t d = batch.obs_size;

  std::vector<double> obs(n * d), old_lp(n), adv(n), ret_e(n), ret_i(n);
  std::vector<std::size_t> act(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = rows[k];
    std::copy_n(batch.obs.begin() + static_cast<std::ptrdiff_t>(r * d), d, obs.begin() + static_cast<std::ptrdiff_t>(k * d));
    act[k] = batch.actions[r];
    old_lp[k] = batch.old_log_prob[r];
    adv[k] = batch.advantages[r];
    ret_e[k] = batch.returns_e[r];
    ret_i[k] = batch.returns_i[r];
  }

  const auto out = policy.forward(Tensor::from({n, d}, std::move(obs)));
  const Tensor logp_all = nn::log_softmax(out.logits);
  const Tensor logp = nn::pick(logp_all, act);
  const Tensor ratio = nn::exp(nn::sub(logp, Tensor::from({n, 1}, std::move(old_lp))));
  const Tensor a = Tensor::from({n, 1}, std::move(adv));
  const Tensor surr1 = nn::mul(ratio, a);
  const Tensor surr2 = nn::mul(nn::clamp(ratio, config.clip_low, config.clip_high), a);
  const Tensor policy_loss = nn::scale(nn::mean(nn::minimum(surr1, surr2)), -1.0);

  const Tensor ve = nn::square(nn::sub(out.value_e, Tensor::from({n, 1}, std::move(ret_e))));
  const Tensor vi = nn::square(nn::sub(out.value_i, Tensor::from({n, 1}, std::move(ret_i))));
  const Tensor value_loss = nn::scale(nn::mean(nn::add(ve, vi)), 0.5);

  const Tensor probs = nn::exp(logp_all);
  const Tensor entropy = nn::scale(nn::mean(nn::sum_rows(nn::mul(probs, logp_all))), -1.0);

  Tensor total = nn::add(policy_loss, nn::scale(value_loss, config.value_coef));
  total = nn::sub(total, nn::scale(entropy, config.entropy_coef));
  return {policy_loss, value_loss, entropy, total};
}

PpoLearner::PpoLearner(PolicyNet& policy, PpoConfig config, std::uint64_t seed)
    : policy_(policy),
      config_(config),
      opt_(nn::tensors_of(policy.parameters()), nn::AdamConfig{config.lr}),
      rng_(derive_seed(seed, {0x990})) {}

PpoReport PpoLearner::update(const PpoBatch& batch,
                             const std::function<void(std::span<const std::size_t>)>& on_minibatch) {
  const std::size_t n = batch.size();
  if (n == 0) throw InvalidInput("ppo update: empty batch");
  if (batch.advantages.size() != n || batch.old_log_prob.size() != n || batch.returns_e.size() != n ||
      batch.returns_i.size() != n || batch.obs.size() != n * batch.obs_size)
    throw InvalidInput("ppo update: batch fields are not aligned");

  PpoReport report;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t mb = std::min(config_.minibatch, n);
  for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng_);
    for (std::size_t start = 0; start < n; start += mb) {
      const std::size_t len = std::min(mb, n - start);
      const std::span<const std::size_t> rows(order.data() + start, len);
      opt_.zero_grad();
      auto terms = ppo_loss(policy_, batch, rows, config_);
      if (!std::isfinite(terms.total.item())) throw NumericError("ppo update: non-finite loss");
      terms.total.backward();
      opt_.step();
      report.policy_loss += terms.policy.item();
      report.value_loss += terms.value.item();
      report.entropy += terms.entropy.item();
      ++report.minibatches;
      if (on_minibatch) on_minibatch(rows);
    }
  }
  const double k = static_cast<double>(report.minibatches);
  report.policy_loss /= k;
  report.value_loss /= k;
  report.entropy /= k;
  return report;
}

}  // namespace curio::agent
