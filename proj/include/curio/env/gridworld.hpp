#pragma once

// Minigrid-style gridworlds: Empty, DoorKey and DynamicObstacles.

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace curio::env {

enum class Action : std::uint8_t { Left = 0, Right, Forward, Pickup, Drop, Toggle, Done };
inline constexpr std::size_t kNumActions = 7;

Action action_from_index(std::size_t i);
const char* action_name(Action a);

/// Object types, in observation channel order.
enum class Cell : std::uint8_t { Unseen = 0, Empty, Wall, Floor, Door, Key, Ball, Box, Goal, Lava, Agent };
inline constexpr std::size_t kNumCellTypes = 11;

enum class DoorState : std::uint8_t { Open, Closed, Locked };

/// Headings follow the Minigrid convention: 0 east, 1 south, 2 west, 3 north.
enum class Heading : std::uint8_t { East = 0, South, West, North };

struct Pos {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pos&, const Pos&) = default;
};

struct Tile {
  Cell type = Cell::Empty;
  DoorState door = DoorState::Closed;
};

// Egocentric observation: 7x7 view, agent at the bottom-centre cell looking
// "up". Each cell holds a one-hot object type (11 channels) and three state
// flags: door open, door locked, agent carrying a key (on the agent's own cell).
inline constexpr int kViewSize = 7;
inline constexpr std::size_t kStateChannels = 3;
inline constexpr std::size_t kChannels = kNumCellTypes + kStateChannels;
inline constexpr std::size_t kObsSize = kViewSize * kViewSize * kChannels;
inline constexpr std::size_t kChanDoorOpen = kNumCellTypes;
inline constexpr std::size_t kChanDoorLocked = kNumCellTypes + 1;
inline constexpr std::size_t kChanCarrying = kNumCellTypes + 2;

using Observation = std::vector<double>;

inline std::size_t obs_index(int vx, int vy, std::size_t channel) {
  return (static_cast<std::size_t>(vy) * kViewSize + static_cast<std::size_t>(vx)) * kChannels + channel;
}

/// Exactly one type channel per cell, state flags in {0,1}, right length.
bool is_valid_observation(const Observation& obs);

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;

  bool done() const { return terminated || truncated; }
};

/// Common surface of base worlds and wrappers.
class Env {
 public:
  virtual ~Env() = default;

  virtual Observation reset(std::uint64_t seed) = 0;
  virtual StepResult step(Action action) = 0;

  virtual int width() const = 0;
  virtual int height() const = 0;
  virtual Pos agent_position() const = 0;
  virtual int max_steps() const = 0;
  virtual std::string name() const = 0;
};

enum class Layout { Empty, DoorKey, DynamicObstacles };

struct GridConfig {
  Layout layout = Layout::Empty;
  int size = 8;
  int max_steps = 0;  // 0: layout default (Empty 4N^2, DoorKey 10N^2, DynamicObstacles 4N^2)
  int obstacles = 0;  // 0: layout default (N/2 for DynamicObstacles)
};

class GridWorld final : public Env {
 public:
  explicit GridWorld(GridConfig config);

  Observation reset(std::uint64_t seed) override;
  StepResult step(Action action) override;

  int width() const override { return size_; }
  int height() const override { return size_; }
  Pos agent_position() const override { return agent_; }
  int max_steps() const override { return max_steps_; }
  std::string name() const override;

  Heading heading() const { return heading_; }
  const Tile& tile(Pos p) const;
  bool carrying_key() const { return carrying_; }
  int step_count() const { return step_count_; }
  bool episode_over() const { return ended_; }
  const std::vector<Pos>& obstacles() const { return obstacles_; }
  Pos front() const;

  Observation observe() const;
  std::string render_ascii() const;

  /// Goal reward for reaching it after `steps` of `max_steps`.
  static double goal_reward(int steps, int max_steps);

 private:
  Tile& at(Pos p);
  bool in_bounds(Pos p) const;
  void build_empty();
  void build_doorkey();
  void build_dynamic_obstacles();
  Pos random_free_cell(int x0, int y0, int w, int h);
  void move_obstacles();
  void wall_border();

  GridConfig config_;
  int size_;
  int max_steps_;
  int n_obstacles_;
  std::vector<Tile> grid_;
  Pos agent_;
  Heading heading_ = Heading::East;
  bool carrying_ = false;
  int step_count_ = 0;
  bool ended_ = true;
  std::vector<Pos> obstacles_;
  std::mt19937_64 rng_;
};

}  // namespace curio::env
