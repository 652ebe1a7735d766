#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace curio::intrinsic {

/// Streaming mean/variance with the parallel (Chan et al.) merge rule.
/// Starts empty: the first batch sets the statistics exactly.
struct RunningMeanStd {
  double mean = 0.0;
  double var = 0.0;
  double count = 0.0;

  void update(std::span<const double> xs);
};

inline constexpr double kStdFloor = 1e-8;

/// Scales intrinsic rewards by the running standard deviation of their
/// per-environment discounted returns. No mean is subtracted, so reward
/// signs and zeros are preserved.
class RewardNormalizer {
 public:
  RewardNormalizer(double gamma, std::size_t num_envs);

  /// rewards is row-major [steps, num_envs]. Updates the running return
  /// filter and statistics, then returns rewards / max(std, 1e-8).
  std::vector<double> normalize(std::span<const double> rewards);

  double std() const;
  const RunningMeanStd& stats() const { return stats_; }

 private:
  double gamma_;
  std::size_t num_envs_;
  std::vector<double> running_return_;
  RunningMeanStd stats_;
};

}  // namespace curio::intrinsic
