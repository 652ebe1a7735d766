#include "curio/env/wrappers.hpp"

#include <cstdio>

#include "curio/error.hpp"
#include "curio/seeding.hpp"

namespace curio::env {

Wrapper::Wrapper(std::unique_ptr<Env> inner) : inner_(std::move(inner)) {
  if (!inner_) throw InvalidInput("Wrapper: null inner environment");
}

NoisyTv::NoisyTv(std::unique_ptr<Env> inner, std::uint64_t seed)
    : Wrapper(std::move(inner)), seed_(seed), rng_(splitmix64(seed)) {}

Observation NoisyTv::reset(std::uint64_t seed) {
  rng_.seed(derive_seed(seed_, {seed}));
  return inner_->reset(seed);
}

Observation NoisyTv::noise_observation() {
  std::uniform_int_distribution<std::size_t> type_dist(0, kNumCellTypes - 1);
  std::uniform_int_distribution<int> door_dist(0, 2);
  std::bernoulli_distribution coin(0.5);
  Observation obs(kObsSize, 0.0);
  for (int vy = 0; vy < kViewSize; ++vy) {
    for (int vx = 0; vx < kViewSize; ++vx) {
      const std::size_t type = type_dist(rng_);
      obs[obs_index(vx, vy, type)] = 1.0;
      if (type == static_cast<std::size_t>(Cell::Door)) {
        const int state = door_dist(rng_);
        if (state == 1) obs[obs_index(vx, vy, kChanDoorOpen)] = 1.0;
        if (state == 2) obs[obs_index(vx, vy, kChanDoorLocked)] = 1.0;
      }
    }
  }
  if (coin(rng_)) obs[obs_index(kViewSize / 2, kViewSize - 1, kChanCarrying)] = 1.0;
  return obs;
}

StepResult NoisyTv::step(Action action) {
  StepResult r = inner_->step(action);
  if (action == Action::Done) r.observation = noise_observation();
  return r;
}

StickyActions::StickyActions(std::unique_ptr<Env> inner, double p, std::uint64_t seed)
    : Wrapper(std::move(inner)), p_(p), seed_(seed), rng_(splitmix64(seed)) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidInput("StickyActions: probability must be in [0, 1)");
}

std::string StickyActions::name() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "+sticky%g", p_);
  return inner_->name() + buf;
}

Observation StickyActions::reset(std::uint64_t seed) {
  rng_.seed(derive_seed(seed_, {seed}));
  has_prev_ = false;
  last_sticky_ = false;
  return inner_->reset(seed);
}

StepResult StickyActions::step(Action action) {
  Action executed = action;
  last_sticky_ = false;
  if (has_prev_) {
    // always consume a draw so the stream does not depend on p
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (u < p_) {
      executed = prev_;
      last_sticky_ = true;
    }
  }
  prev_ = executed;
  has_prev_ = true;
  return inner_->step(executed);
}

}  // namespace curio::env
