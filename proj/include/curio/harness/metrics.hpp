#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace curio::harness {

struct MetricsRow {
  std::uint64_t frame = 0;
  std::uint64_t seed = 0;
  double mean_return = 0.0;     // moving mean over the last 100 finished episodes
  double mean_intrinsic = 0.0;  // raw (unnormalized) intrinsic reward over the rollout
  double loss_policy = 0.0;
  double loss_value = 0.0;
  double loss_recon = 0.0;
  double loss_kl = 0.0;
  double loss_inverse = 0.0;
  double entropy = 0.0;
  double wallclock_s = 0.0;
};

inline constexpr const char* kMetricsHeader =
    "frame,seed,mean_return,mean_intrinsic,loss_policy,loss_value,loss_recon,loss_kl,loss_inverse,entropy,wallclock_s";

std::string format_row(const MetricsRow& row);
MetricsRow parse_row(const std::string& line);

/// Append-only CSV; every row is flushed so a crash leaves a valid prefix.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::filesystem::path& path);
  ~MetricsWriter();
  MetricsWriter(const MetricsWriter&) = delete;
  MetricsWriter& operator=(const MetricsWriter&) = delete;

  void append(const MetricsRow& row);

 private:
  std::FILE* file_ = nullptr;
};

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path);

/// Fixed-capacity moving mean of episodic returns.
class ReturnWindow {
 public:
  explicit ReturnWindow(std::size_t capacity = 100) : capacity_(capacity) {}

  void push(double episode_return);
  double mean() const;  // 0 when no episode has finished
  std::size_t size() const { return values_.size(); }

 private:
  std::size_t capacity_;
  std::deque<double> values_;
};

/// Mean of the last max(1, round(10%)) values of a series.
double tail_mean(std::span<const double> xs, double fraction = 0.1);
/// Mean of the first max(1, round(10%)) values of a series.
double head_mean(std::span<const double> xs, double fraction = 0.1);

/// Mean return over the final 10% of rows for each seed, averaged across
/// seeds and divided by max_return. Every seed needs at least 10 rows.
double normalized_average_return(std::span<const MetricsRow> rows, double max_return = 1.0);

/// Same tail statistic for a single seed.
double normalized_seed_return(std::span<const MetricsRow> rows, std::uint64_t seed, double max_return = 1.0);

std::vector<std::uint64_t> seeds_in(std::span<const MetricsRow> rows);

}  // namespace curio::harness
