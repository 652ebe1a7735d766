#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "curio/env/gridworld.hpp"

namespace curio::env {

/// Forwards everything to an owned inner environment.
class Wrapper : public Env {
 public:
  explicit Wrapper(std::unique_ptr<Env> inner);

  Observation reset(std::uint64_t seed) override { return inner_->reset(seed); }
  StepResult step(Action action) override { return inner_->step(action); }
  int width() const override { return inner_->width(); }
  int height() const override { return inner_->height(); }
  Pos agent_position() const override { return inner_->agent_position(); }
  int max_steps() const override { return inner_->max_steps(); }
  std::string name() const override { return inner_->name(); }

  Env& inner() { return *inner_; }

 protected:
  std::unique_ptr<Env> inner_;
};

/// Noisy TV: choosing `done` replaces that step's observation with a fresh
/// random (but valid) one-hot pattern. Rewards, termination and dynamics
/// pass through untouched, and the noise lasts exactly one step.
class NoisyTv final : public Wrapper {
 public:
  NoisyTv(std::unique_ptr<Env> inner, std::uint64_t seed);

  Observation reset(std::uint64_t seed) override;
  StepResult step(Action action) override;
  std::string name() const override { return inner_->name() + "+noisytv"; }

  Observation noise_observation();

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

/// Sticky actions: with probability p the previously executed action runs
/// instead of the requested one. The first step after reset is never sticky.
class StickyActions final : public Wrapper {
 public:
  StickyActions(std::unique_ptr<Env> inner, double p, std::uint64_t seed);

  Observation reset(std::uint64_t seed) override;
  StepResult step(Action action) override;
  std::string name() const override;

  double probability() const { return p_; }
  bool last_was_sticky() const { return last_sticky_; }
  Action last_executed() const { return prev_; }

 private:
  double p_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  bool has_prev_ = false;
  bool last_sticky_ = false;
  Action prev_ = Action::Done;
};

}  // namespace curio::env
