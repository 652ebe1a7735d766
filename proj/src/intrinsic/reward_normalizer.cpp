#include "curio/intrinsic/reward_normalizer.hpp"

#include <algorithm>
#include <cmath>

#include "curio/error.hpp"

namespace curio::intrinsic {

void RunningMeanStd::update(std::span<const double> xs) {
  if (xs.empty()) return;
  const double n = static_cast<double>(xs.size());
  double bmean = 0.0;
  for (double x : xs) bmean += x;
  bmean /= n;
  double bvar = 0.0;
  for (double x : xs) bvar += (x - bmean) * (x - bmean);
  bvar /= n;

  const double total = count + n;
  const double delta = bmean - mean;
  const double m2 = var * count + bvar * n + delta * delta * count * n / total;
  mean += delta * n / total;
  var = m2 / total;
  count = total;
}

RewardNormalizer::RewardNormalizer(double gamma, std::size_t num_envs)
    : gamma_(gamma), num_envs_(num_envs), running_return_(num_envs, 0.0) {
  if (num_envs == 0) throw InvalidInput("RewardNormalizer: need at least one environment");
}

double RewardNormalizer::std() const { return std::max(std::sqrt(stats_.var), kStdFloor); }

std::vector<double> RewardNormalizer::normalize(std::span<const double> rewards) {
  if (rewards.size() % num_envs_ != 0) throw InvalidInput("RewardNormalizer: rewards not a multiple of env count");
  std::vector<double> returns(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    double& acc = running_return_[i % num_envs_];
    acc = acc * gamma_ + rewards[i];
    returns[i] = acc;
  }
  stats_.update(returns);
  const double sd = std();
  std::vector<double> out(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = rewards[i] / sd;
  return out;
}

}  // namespace curio::intrinsic
