#include "curio/env/gridworld.hpp"

#include <array>
#include <sstream>

#include "curio/error.hpp"
#include "curio/seeding.hpp"

namespace curio::env {

namespace {

constexpr std::array<Pos, 4> kDirVec{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
constexpr int kPlacementAttempts = 1000;

int uniform_int(std::mt19937_64& rng, int lo, int hi_exclusive) {
  return std::uniform_int_distribution<int>(lo, hi_exclusive - 1)(rng);
}

bool can_overlap(const Tile& t) {
  switch (t.type) {
    case Cell::Empty:
    case Cell::Floor:
    case Cell::Goal:
    case Cell::Lava:
      return true;
    case Cell::Door:
      return t.door == DoorState::Open;
    default:
      return false;
  }
}

}  // namespace

Action action_from_index(std::size_t i) {
  if (i >= kNumActions) throw InvalidInput("action index " + std::to_string(i) + " out of range");
  return static_cast<Action>(i);
}

const char* action_name(Action a) {
  static constexpr const char* names[] = {"left", "right", "forward", "pickup", "drop", "toggle", "done"};
  return names[static_cast<std::size_t>(a)];
}

GridWorld::GridWorld(GridConfig config) : config_(config), size_(config.size) {
  if (size_ < 5) throw InvalidInput("GridWorld: size must be at least 5");
  const int area = size_ * size_;
  switch (config.layout) {
    case Layout::Empty:
      max_steps_ = 4 * area;
      break;
    case Layout::DoorKey:
      max_steps_ = 10 * area;
      break;
    case Layout::DynamicObstacles:
      max_steps_ = 4 * area;
      break;
  }
  if (config.max_steps > 0) max_steps_ = config.max_steps;
  n_obstacles_ = config.layout == Layout::DynamicObstacles ? (config.obstacles > 0 ? config.obstacles : size_ / 2) : 0;
  grid_.assign(static_cast<std::size_t>(area), Tile{});
}

std::string GridWorld::name() const {
  const char* base = config_.layout == Layout::Empty ? "empty" : config_.layout == Layout::DoorKey ? "doorkey" : "dynobs";
  return base + std::to_string(size_);
}

bool GridWorld::in_bounds(Pos p) const { return p.x >= 0 && p.y >= 0 && p.x < size_ && p.y < size_; }

const Tile& GridWorld::tile(Pos p) const {
  if (!in_bounds(p)) throw InvalidInput("GridWorld::tile: position out of bounds");
  return grid_[static_cast<std::size_t>(p.y * size_ + p.x)];
}

Tile& GridWorld::at(Pos p) { return grid_[static_cast<std::size_t>(p.y * size_ + p.x)]; }

Pos GridWorld::front() const {
  const Pos d = kDirVec[static_cast<int>(heading_)];
  return {agent_.x + d.x, agent_.y + d.y};
}

double GridWorld::goal_reward(int steps, int max_steps) {
  return 1.0 - 0.9 * (static_cast<double>(steps) / static_cast<double>(max_steps));
}

void GridWorld::wall_border() {
  std::fill(grid_.begin(), grid_.end(), Tile{});
  for (int i = 0; i < size_; ++i) {
    at({i, 0}).type = Cell::Wall;
    at({i, size_ - 1}).type = Cell::Wall;
    at({0, i}).type = Cell::Wall;
    at({size_ - 1, i}).type = Cell::Wall;
  }
}

Pos GridWorld::random_free_cell(int x0, int y0, int w, int h) {
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    const Pos p{uniform_int(rng_, x0, x0 + w), uniform_int(rng_, y0, y0 + h)};
    if (!in_bounds(p) || at(p).type != Cell::Empty || p == agent_) continue;
    return p;
  }
  throw GenerationError("GridWorld: no free cell found after " + std::to_string(kPlacementAttempts) + " attempts");
}

void GridWorld::build_empty() {
  wall_border();
  at({size_ - 2, size_ - 2}).type = Cell::Goal;
  agent_ = {1, 1};
  heading_ = Heading::East;
}

void GridWorld::build_doorkey() {
  wall_border();
  at({size_ - 2, size_ - 2}).type = Cell::Goal;
  const int split = uniform_int(rng_, 2, size_ - 2);
  for (int y = 0; y < size_; ++y) at({split, y}).type = Cell::Wall;

  agent_ = {-1, -1};
  agent_ = random_free_cell(0, 0, split, size_);
  heading_ = static_cast<Heading>(uniform_int(rng_, 0, 4));

  const int door_row = uniform_int(rng_, 1, size_ - 2);
  at({split, door_row}) = Tile{Cell::Door, DoorState::Locked};

  const Pos key = random_free_cell(0, 0, split, size_);
  at(key).type = Cell::Key;
}

void GridWorld::build_dynamic_obstacles() {
  wall_border();
  at({size_ - 2, size_ - 2}).type = Cell::Goal;
  agent_ = {1, 1};
  heading_ = Heading::East;
  obstacles_.clear();
  for (int i = 0; i < n_obstacles_; ++i) {
    const Pos p = random_free_cell(0, 0, size_, size_);
    at(p).type = Cell::Ball;
    obstacles_.push_back(p);
  }
}

Observation GridWorld::reset(std::uint64_t seed) {
  rng_.seed(splitmix64(seed));
  carrying_ = false;
  step_count_ = 0;
  obstacles_.clear();
  switch (config_.layout) {
    case Layout::Empty:
      build_empty();
      break;
    case Layout::DoorKey:
      build_doorkey();
      break;
    case Layout::DynamicObstacles:
      build_dynamic_obstacles();
      break;
  }
  ended_ = false;
  return observe();
}

void GridWorld::move_obstacles() {
  for (Pos& o : obstacles_) {
    std::array<Pos, 8> free{};
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Pos p{o.x + dx, o.y + dy};
        if (in_bounds(p) && at(p).type == Cell::Empty && !(p == agent_)) free[static_cast<std::size_t>(n++)] = p;
      }
    }
    if (n == 0) continue;
    const Pos dest = free[static_cast<std::size_t>(uniform_int(rng_, 0, n))];
    at(o).type = Cell::Empty;
    at(dest).type = Cell::Ball;
    o = dest;
  }
}

StepResult GridWorld::step(Action action) {
  if (ended_) throw UsageError("GridWorld::step called after the episode ended; call reset()");
  ++step_count_;

  StepResult r;
  if (config_.layout == Layout::DynamicObstacles) move_obstacles();

  const Pos ahead = front();
  switch (action) {
    case Action::Left:
      heading_ = static_cast<Heading>((static_cast<int>(heading_) + 3) % 4);
      break;
    case Action::Right:
      heading_ = static_cast<Heading>((static_cast<int>(heading_) + 1) % 4);
      break;
    case Action::Forward: {
      const Tile& t = tile(ahead);
      if (config_.layout == Layout::DynamicObstacles && t.type == Cell::Ball) {
        r.reward = -1.0;
        r.terminated = true;
      } else if (can_overlap(t)) {
        agent_ = ahead;
        if (t.type == Cell::Goal) {
          r.reward = goal_reward(step_count_, max_steps_);
          r.terminated = true;
        } else if (t.type == Cell::Lava) {
          r.terminated = true;
        }
      }
      break;
    }
    case Action::Pickup: {
      // only keys are collectable; dynamic obstacles stay on the board
      Tile& t = at(ahead);
      if (!carrying_ && t.type == Cell::Key) {
        carrying_ = true;
        t = Tile{};
      }
      break;
    }
    case Action::Drop: {
      Tile& t = at(ahead);
      if (carrying_ && t.type == Cell::Empty) {
        t.type = Cell::Key;
        carrying_ = false;
      }
      break;
    }
    case Action::Toggle: {
      Tile& t = at(ahead);
      if (t.type == Cell::Door) {
        if (t.door == DoorState::Locked) {
          if (carrying_) t.door = DoorState::Open;
        } else {
          t.door = t.door == DoorState::Open ? DoorState::Closed : DoorState::Open;
        }
      }
      break;
    }
    case Action::Done:
      break;
  }

  if (!r.terminated && step_count_ >= max_steps_) r.truncated = true;
  ended_ = r.done();
  r.observation = observe();
  return r;
}

std::string GridWorld::render_ascii() const {
  static constexpr char arrows[] = {'>', 'v', '<', '^'};
  std::ostringstream os;
  for (int y = 0; y < size_; ++y) {
    for (int x = 0; x < size_; ++x) {
      if (Pos{x, y} == agent_) {
        os << arrows[static_cast<int>(heading_)];
        continue;
      }
      const Tile& t = tile({x, y});
      switch (t.type) {
        case Cell::Wall: os << '#'; break;
        case Cell::Goal: os << 'G'; break;
        case Cell::Key: os << 'K'; break;
        case Cell::Ball: os << 'o'; break;
        case Cell::Door: os << (t.door == DoorState::Open ? '/' : t.door == DoorState::Locked ? 'L' : 'D'); break;
        default: os << '.'; break;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace curio::env
