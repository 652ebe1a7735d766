#include "curio/agent/gae.hpp"

#include <cmath>

#include "curio/error.hpp"

namespace curio::agent {

AdvantageReturn gae(std::span<const double> rewards, std::span<const double> values, double bootstrap,
                    std::span<const std::uint8_t> dones, double gamma, double lambda, bool episodic) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) throw InvalidInput("gae: rewards, values and dones must be aligned");
  if (gamma < 0.0 || gamma > 1.0 || lambda < 0.0 || lambda > 1.0) throw InvalidInput("gae: gamma and lambda must lie in [0, 1]");

  AdvantageReturn out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0.0;
  double next_value = bootstrap;
  for (std::size_t i = n; i-- > 0;) {
    const double mask = (episodic && dones[i]) ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_value * mask - values[i];
    next_adv = delta + gamma * lambda * mask * next_adv;
    out.advantages[i] = next_adv;
    out.returns[i] = next_adv + values[i];
    next_value = values[i];
  }
  return out;
}

std::vector<double> combine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("combine: length mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<double> standardize(std::span<const double> xs) {
  if (xs.empty()) return {};
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = sd > 0.0 ? (xs[i] - mean) / sd : 0.0;
  return out;
}

}  // namespace curio::agent
