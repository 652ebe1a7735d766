#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "curio/env/gridworld.hpp"

namespace curio::env {

struct EnvSpec {
  std::string id = "empty8";  // empty8, empty16, doorkey8, doorkey16, dynobs8, dynobs16
  bool noisy_tv = false;
  double sticky = 0.0;  // 0 disables the wrapper
};

GridConfig grid_config_for(const std::string& id);

/// Builds the base world and applies wrappers (sticky innermost, Noisy TV
/// outermost). wrapper_seed seeds the wrappers' own generators.
std::unique_ptr<Env> make_env(const EnvSpec& spec, std::uint64_t wrapper_seed);

}  // namespace curio::env
