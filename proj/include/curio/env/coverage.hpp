#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "curio/env/gridworld.hpp"

namespace curio::env {

inline constexpr std::uint64_t kCoverageClip = 10000;

/// Per-cell visitation counts over a whole experiment.
class CoverageMap {
 public:
  CoverageMap(int width, int height);

  void record(Pos p);
  std::uint64_t count(Pos p) const;
  void set_count(Pos p, std::uint64_t n);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  /// Row-major values 1 + 99 * min(count, 10000) / 10000.
  std::vector<double> heatmap() const;

  void write_csv(const std::filesystem::path& path) const;
  void write_pgm(const std::filesystem::path& path) const;

 private:
  std::size_t index(Pos p) const;

  int width_;
  int height_;
  std::vector<std::uint64_t> counts_;
};

double coverage_value(std::uint64_t count);

}  // namespace curio::env
