#include "curio/env/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "curio/error.hpp"

namespace curio::env {

double coverage_value(std::uint64_t count) {
  const double clipped = static_cast<double>(std::min(count, kCoverageClip));
  return 1.0 + 99.0 * clipped / static_cast<double>(kCoverageClip);
}

CoverageMap::CoverageMap(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw InvalidInput("CoverageMap: dimensions must be positive");
  counts_.assign(static_cast<std::size_t>(width * height), 0);
}

std::size_t CoverageMap::index(Pos p) const {
  if (p.x < 0 || p.y < 0 || p.x >= width_ || p.y >= height_)
    throw InvalidInput("CoverageMap: position (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") out of bounds");
  return static_cast<std::size_t>(p.y * width_ + p.x);
}

void CoverageMap::record(Pos p) { ++counts_[index(p)]; }
std::uint64_t CoverageMap::count(Pos p) const { return counts_[index(p)]; }
void CoverageMap::set_count(Pos p, std::uint64_t n) { counts_[index(p)] = n; }

std::vector<double> CoverageMap::heatmap() const {
  std::vector<double> out(counts_.size());
  std::transform(counts_.begin(), counts_.end(), out.begin(), coverage_value);
  return out;
}

void CoverageMap::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path.string());
  os << "x,y,value\n";
  const auto h = heatmap();
  char buf[64];
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.6f\n", x, y, h[static_cast<std::size_t>(y * width_ + x)]);
      os << buf;
    }
  }
}

void CoverageMap::write_pgm(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path.string());
  os << "P2\n" << width_ << ' ' << height_ << "\n255\n";
  const auto h = heatmap();
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const double v = h[static_cast<std::size_t>(y * width_ + x)];
      os << static_cast<int>(std::lround((v - 1.0) / 99.0 * 255.0)) << (x + 1 < width_ ? ' ' : '\n');
    }
  }
}

}  // namespace curio::env
