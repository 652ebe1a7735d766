#include "curio/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "curio/error.hpp"
#include "curio/seeding.hpp"

namespace curio::noise {

ComplexBuffer::ComplexBuffer(std::vector<double> real, std::vector<double> imag)
    : re(std::move(real)), im(std::move(imag)) {
  if (re.size() != im.size()) throw InvalidInput("ComplexBuffer: re/im length mismatch");
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(ComplexBuffer& buf, bool inverse) {
  const std::size_t n = buf.size();
  if (buf.im.size() != n) throw InvalidInput("fft: re/im length mismatch");
  if (!is_power_of_two(n)) throw InvalidInput("fft: length " + std::to_string(n) + " is not a power of two");

  auto& re = buf.re;
  auto& im = buf.im;

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    // Twiddles evaluated directly rather than by recurrence to keep the
    // round-trip error at machine precision for long transforms.
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      const double wr = std::cos(angle);
      const double wi = std::sin(angle);
      for (std::size_t start = 0; start < n; start += len) {
        const std::size_t a = start + k;
        const std::size_t b = a + half;
        const double tr = re[b] * wr - im[b] * wi;
        const double ti = re[b] * wi + im[b] * wr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      re[i] *= scale;
      im[i] *= scale;
    }
  }
}

ComplexBuffer fft(ComplexBuffer buf, bool inverse) {
  fft_inplace(buf, inverse);
  return buf;
}

namespace {

void standardize(std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  for (double& x : v) x -= mean;
  double ss = 0.0;
  for (double x : v) ss += x * x;
  const double sd = std::sqrt(ss / n);
  if (sd > 0.0) {
    for (double& x : v) x /= sd;
  }
  // a second centering pass removes the residual rounding of the first
  const double residual = std::accumulate(v.begin(), v.end(), 0.0) / n;
  for (double& x : v) x -= residual;
}

}  // namespace

NoiseSequence generate(double beta, std::size_t length, std::uint64_t seed) {
  if (length == 0) throw InvalidInput("noise::generate: length must be >= 1");
  if (!std::isfinite(beta)) throw InvalidInput("noise::generate: beta must be finite");

  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> gauss(0.0, 1.0);

  NoiseSequence out;
  out.beta = beta;
  out.seed = seed;

  if (length == 1) {
    out.values = {gauss(rng)};
    return out;
  }

  const std::size_t n = next_power_of_two(length);
  const std::size_t half = n / 2;

  // amplitude scale per non-negative frequency bin k/n, k = 0..n/2
  std::vector<double> scale(half + 1);
  for (std::size_t k = 1; k <= half; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n);
    scale[k] = std::pow(f, -beta / 2.0);
  }
  scale[0] = scale[1];

  ComplexBuffer spec(n);
  for (std::size_t k = 0; k <= half; ++k) {
    spec.re[k] = gauss(rng) * scale[k];
    spec.im[k] = gauss(rng) * scale[k];
  }
  // DC and Nyquist bins of a real signal are real
  spec.im[0] = 0.0;
  spec.re[0] *= std::numbers::sqrt2;
  spec.im[half] = 0.0;
  spec.re[half] *= std::numbers::sqrt2;
  for (std::size_t k = 1; k < half; ++k) {
    spec.re[n - k] = spec.re[k];
    spec.im[n - k] = -spec.im[k];
  }

  fft_inplace(spec, true);
  out.values.assign(spec.re.begin(), spec.re.begin() + static_cast<std::ptrdiff_t>(length));
  standardize(out.values);
  return out;
}

Periodogram periodogram(std::span<const double> values) {
  if (values.size() < 8) throw InvalidInput("periodogram: need at least 8 samples");
  const std::size_t n = next_power_of_two(values.size());
  ComplexBuffer buf(n);
  std::copy(values.begin(), values.end(), buf.re.begin());
  fft_inplace(buf);

  Periodogram p;
  const std::size_t m = n / 2;
  p.frequencies.resize(m);
  p.power.resize(m);
  for (std::size_t k = 1; k <= m; ++k) {
    p.frequencies[k - 1] = static_cast<double>(k) / static_cast<double>(n);
    p.power[k - 1] = (buf.re[k] * buf.re[k] + buf.im[k] * buf.im[k]) / static_cast<double>(n);
  }
  return p;
}

double fit_psd_slope(std::span<const Periodogram> ensemble) {
  if (ensemble.empty()) throw InvalidInput("fit_psd_slope: empty ensemble");
  const auto& grid = ensemble.front().frequencies;
  for (const auto& p : ensemble) {
    if (p.frequencies != grid || p.power.size() != grid.size())
      throw InvalidInput("fit_psd_slope: periodograms have mismatched frequency grids");
  }

  const std::size_t m = grid.size();
  const std::size_t lo = 2;
  const std::size_t hi = m - static_cast<std::size_t>(std::floor(0.05 * static_cast<double>(m)));
  if (hi <= lo + 1) throw InvalidInput("fit_psd_slope: too few frequency bins to fit");

  std::vector<double> xs, ys;
  xs.reserve(hi - lo);
  ys.reserve(hi - lo);
  for (std::size_t k = lo; k < hi; ++k) {
    double mean_log = 0.0;
    for (const auto& p : ensemble) {
      if (!(p.power[k] > 0.0)) throw InvalidInput("fit_psd_slope: non-positive power in fitted band");
      mean_log += std::log(p.power[k]);
    }
    xs.push_back(std::log(grid[k]));
    ys.push_back(mean_log / static_cast<double>(ensemble.size()));
  }

  const double cnt = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / cnt;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / cnt;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

std::pair<std::uint64_t, std::uint64_t> random_walk_seeds(std::uint64_t seed) {
  return {derive_seed(seed, {0}), derive_seed(seed, {1})};
}

std::vector<Point2> random_walk_2d(double beta, std::size_t steps, std::uint64_t seed) {
  if (steps == 0) throw InvalidInput("random_walk_2d: steps must be >= 1");
  const auto [sx, sy] = random_walk_seeds(seed);
  const auto dx = generate(beta, steps, sx);
  const auto dy = generate(beta, steps, sy);

  std::vector<Point2> path;
  path.reserve(steps + 1);
  path.push_back({0.0, 0.0});
  for (std::size_t i = 0; i < steps; ++i) {
    const Point2 last = path.back();
    path.push_back({last.x + dx.values[i], last.y + dy.values[i]});
  }
  return path;
}

double bounding_box_area(std::span<const Point2> trajectory) {
  if (trajectory.empty()) return 0.0;
  auto [xmin, xmax] = std::minmax_element(trajectory.begin(), trajectory.end(),
                                          [](const Point2& a, const Point2& b) { return a.x < b.x; });
  auto [ymin, ymax] = std::minmax_element(trajectory.begin(), trajectory.end(),
                                          [](const Point2& a, const Point2& b) { return a.y < b.y; });
  return (xmax->x - xmin->x) * (ymax->y - ymin->y);
}

}  // namespace curio::noise
