#include "curio/env/registry.hpp"

#include "curio/env/wrappers.hpp"
#include "curio/error.hpp"
#include "curio/seeding.hpp"

namespace curio::env {

GridConfig grid_config_for(const std::string& id) {
  if (id == "empty8") return {Layout::Empty, 8};
  if (id == "empty16") return {Layout::Empty, 16};
  if (id == "doorkey8") return {Layout::DoorKey, 8};
  if (id == "doorkey16") return {Layout::DoorKey, 16};
  if (id == "dynobs8") return {Layout::DynamicObstacles, 8};
  if (id == "dynobs16") return {Layout::DynamicObstacles, 16};
  throw InvalidInput("unknown environment '" + id + "' (expected empty8, empty16, doorkey8, doorkey16, dynobs8, dynobs16)");
}

std::unique_ptr<Env> make_env(const EnvSpec& spec, std::uint64_t wrapper_seed) {
  std::unique_ptr<Env> env = std::make_unique<GridWorld>(grid_config_for(spec.id));
  if (spec.sticky > 0.0) env = std::make_unique<StickyActions>(std::move(env), spec.sticky, derive_seed(wrapper_seed, {1}));
  if (spec.noisy_tv) env = std::make_unique<NoisyTv>(std::move(env), derive_seed(wrapper_seed, {2}));
  return env;
}

}  // namespace curio::env
