#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace curio::agent {

struct AdvantageReturn {
  std::vector<double> advantages;
  std::vector<double> returns;
};

/// Generalized advantage estimation over one environment's stream.
///   delta_t = r_t + gamma * V_{t+1} * m_t - V_t
///   A_t     = delta_t + gamma * lambda * m_t * A_{t+1}
/// with m_t = 0 when done_t and the stream is episodic, else 1, and
/// V_K = bootstrap. Returns are A + V.
AdvantageReturn gae(std::span<const double> rewards, std::span<const double> values, double bootstrap,
                    std::span<const std::uint8_t> dones, double gamma, double lambda, bool episodic);

/// Elementwise sum of two aligned streams.
std::vector<double> combine(std::span<const double> a, std::span<const double> b);

/// Shift and scale to zero mean and unit population standard deviation.
/// A constant input maps to all zeros.
std::vector<double> standardize(std::span<const double> xs);

}  // namespace curio::agent
