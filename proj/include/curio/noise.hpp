#pragma once

// Colored (power-law) Gaussian noise and the spectral tooling used to check it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace curio::noise {

struct NoiseSequence {
  std::vector<double> values;
  double beta = 0.0;
  std::uint64_t seed = 0;
};

struct ComplexBuffer {
  std::vector<double> re;
  std::vector<double> im;

  ComplexBuffer() = default;
  explicit ComplexBuffer(std::size_t n) : re(n, 0.0), im(n, 0.0) {}
  ComplexBuffer(std::vector<double> real, std::vector<double> imag);

  std::size_t size() const { return re.size(); }
};

struct Periodogram {
  std::vector<double> frequencies;  // cycles per step, DC excluded
  std::vector<double> power;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

/// Radix-2 DFT. The inverse is scaled by 1/N so that fft(fft(x), true) == x.
/// Throws InvalidInput unless the length is a power of two.
ComplexBuffer fft(ComplexBuffer buf, bool inverse = false);
void fft_inplace(ComplexBuffer& buf, bool inverse = false);

/// Gaussian noise whose power spectral density follows f^-beta.
///
/// Spectral coefficients are drawn per positive frequency with standard
/// deviation f^(-beta/2), made Hermitian and inverse transformed at the next
/// power of two >= length, then truncated. The DC scale is clamped to the
/// lowest nonzero frequency's scale. The result is standardized to zero mean
/// and unit (population) variance, so beta only changes the correlation
/// structure. A length-1 sequence is a single standard normal draw.
NoiseSequence generate(double beta, std::size_t length, std::uint64_t seed);

/// |X_k|^2 / N for k = 1 .. N/2 with N the zero-padded power-of-two length.
/// Requires at least 8 samples.
Periodogram periodogram(std::span<const double> values);
inline Periodogram periodogram(const NoiseSequence& seq) { return periodogram(seq.values); }

/// Least-squares slope of the ensemble-mean log power against log frequency.
/// The lowest 2 bins and the top 5% of bins are excluded from the fit.
double fit_psd_slope(std::span<const Periodogram> ensemble);

/// Seeds of the x and y sequences driving random_walk_2d.
std::pair<std::uint64_t, std::uint64_t> random_walk_seeds(std::uint64_t seed);

/// Walk starting at the origin whose per-step displacements are two
/// independent colored-noise sequences. Returns steps + 1 points.
std::vector<Point2> random_walk_2d(double beta, std::size_t steps, std::uint64_t seed);

/// Area of the axis-aligned bounding box of a trajectory.
double bounding_box_area(std::span<const Point2> trajectory);

}  // namespace curio::noise
