#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curio/agent/ppo.hpp"
#include "curio/env/registry.hpp"
#include "curio/intrinsic/intrinsic.hpp"

namespace curio::harness {

struct ExperimentConfig {
  std::string name = "run";
  env::EnvSpec env{};
  intrinsic::Variant variant = intrinsic::Variant::None;
  std::optional<double> beta;
  std::vector<std::uint64_t> seeds{1, 3, 5};
  std::uint64_t total_frames = 98 * 2048;  // smallest multiple of K*E above 200k

  std::size_t rollout_length = 128;  // K
  std::size_t num_envs = 16;         // E
  agent::PpoConfig ppo{};
  double gamma_e = 0.99;
  double gamma_i = 0.99;
  double lambda = 0.95;

  bool zero_extrinsic = false;
  bool record_wallclock = false;
  std::filesystem::path out_dir = "out";

  std::uint64_t frames_per_rollout() const { return rollout_length * num_envs; }
  std::uint64_t num_rollouts() const { return total_frames / frames_per_rollout(); }
  std::filesystem::path run_dir() const { return out_dir / name; }

  /// Throws UsageError describing the first violated constraint.
  void validate() const;
};

/// Sets one `key = value` setting; unknown keys and malformed values are
/// usage errors.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Reads line-oriented `key = value` text. Blank lines and lines starting
/// with '#' are skipped. Settings are applied on top of `base`.
ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const ExperimentConfig& config);

/// Smallest multiple of `step` that is >= frames.
std::uint64_t round_up_frames(std::uint64_t frames, std::uint64_t step);

}  // namespace curio::harness
