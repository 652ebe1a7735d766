#include <array>

#include "curio/env/gridworld.hpp"

namespace curio::env {

namespace {

constexpr std::array<Pos, 4> kDirVec{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

bool blocks_sight(const Tile& t) {
  return t.type == Cell::Wall || (t.type == Cell::Door && t.door != DoorState::Open);
}

}  // namespace

bool is_valid_observation(const Observation& obs) {
  if (obs.size() != kObsSize) return false;
  for (int vy = 0; vy < kViewSize; ++vy) {
    for (int vx = 0; vx < kViewSize; ++vx) {
      int active = 0;
      for (std::size_t c = 0; c < kNumCellTypes; ++c) {
        const double v = obs[obs_index(vx, vy, c)];
        if (v != 0.0 && v != 1.0) return false;
        active += v == 1.0;
      }
      if (active != 1) return false;
      for (std::size_t c = kNumCellTypes; c < kChannels; ++c) {
        const double v = obs[obs_index(vx, vy, c)];
        if (v != 0.0 && v != 1.0) return false;
      }
    }
  }
  return true;
}

Observation GridWorld::observe() const {
  constexpr int V = kViewSize;
  const Pos fwd = kDirVec[static_cast<int>(heading_)];
  const Pos right = kDirVec[(static_cast<int>(heading_) + 1) % 4];

  std::array<Tile, V * V> view;
  for (int vy = 0; vy < V; ++vy) {
    for (int vx = 0; vx < V; ++vx) {
      const int f = V - 1 - vy;
      const int l = vx - V / 2;
      const Pos w{agent_.x + f * fwd.x + l * right.x, agent_.y + f * fwd.y + l * right.y};
      view[vy * V + vx] = in_bounds(w) ? tile(w) : Tile{Cell::Wall, DoorState::Closed};
    }
  }
  const int ax = V / 2, ay = V - 1;
  view[ay * V + ax] = Tile{Cell::Agent, DoorState::Closed};

  // Minigrid's visibility sweep: rows from the agent outward, spreading
  // sideways and forward through cells that do not block sight.
  std::array<bool, V * V> seen{};
  seen[ay * V + ax] = true;
  for (int j = V - 1; j >= 0; --j) {
    for (int i = 0; i < V - 1; ++i) {
      if (!seen[j * V + i] || blocks_sight(view[j * V + i])) continue;
      seen[j * V + i + 1] = true;
      if (j > 0) {
        seen[(j - 1) * V + i + 1] = true;
        seen[(j - 1) * V + i] = true;
      }
    }
    for (int i = V - 1; i > 0; --i) {
      if (!seen[j * V + i] || blocks_sight(view[j * V + i])) continue;
      seen[j * V + i - 1] = true;
      if (j > 0) {
        seen[(j - 1) * V + i - 1] = true;
        seen[(j - 1) * V + i] = true;
      }
    }
  }

  Observation obs(kObsSize, 0.0);
  for (int vy = 0; vy < V; ++vy) {
    for (int vx = 0; vx < V; ++vx) {
      const Tile& t = view[vy * V + vx];
      if (!seen[vy * V + vx]) {
        obs[obs_index(vx, vy, static_cast<std::size_t>(Cell::Unseen))] = 1.0;
        continue;
      }
      obs[obs_index(vx, vy, static_cast<std::size_t>(t.type))] = 1.0;
      if (t.type == Cell::Door) {
        if (t.door == DoorState::Open) obs[obs_index(vx, vy, kChanDoorOpen)] = 1.0;
        if (t.door == DoorState::Locked) obs[obs_index(vx, vy, kChanDoorLocked)] = 1.0;
      }
    }
  }
  if (carrying_) obs[obs_index(ax, ay, kChanCarrying)] = 1.0;
  return obs;
}

}  // namespace curio::env
