#include "curio/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "curio/error.hpp"

namespace curio::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw UsageError("config key '" + key + "': expected a number, got '" + v + "'");
  }
  if (used != v.size()) throw UsageError("config key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw UsageError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (name.empty() || name.find('/') != std::string::npos) throw UsageError("config: name must be a plain directory name");
  try {
    env::grid_config_for(env.id);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  if (env.sticky < 0.0 || env.sticky >= 1.0) throw UsageError("config: sticky probability must lie in [0, 1)");
  if (variant == intrinsic::Variant::Tecle && !beta) throw UsageError("config: beta is required for the tecle variant");
  if (variant != intrinsic::Variant::Tecle && beta)
    throw UsageError("config: beta is only meaningful for the tecle variant");
  if (seeds.empty()) throw UsageError("config: at least one seed is required");
  if (rollout_length == 0 || num_envs == 0) throw UsageError("config: rollout length and env count must be positive");
  if (total_frames == 0 || total_frames % frames_per_rollout() != 0) {
    throw UsageError("config: total frames (" + std::to_string(total_frames) + ") must be a positive multiple of " +
                     std::to_string(frames_per_rollout()) + "; nearest valid value above is " +
                     std::to_string(round_up_frames(std::max<std::uint64_t>(total_frames, 1), frames_per_rollout())));
  }
  if (ppo.epochs == 0 || ppo.minibatch == 0) throw UsageError("config: epochs and minibatch must be positive");
  if (!(ppo.clip_low > 0.0 && ppo.clip_low <= 1.0 && ppo.clip_high >= 1.0))
    throw UsageError("config: clip range must bracket 1");
  for (double g : {gamma_e, gamma_i, lambda}) {
    if (g < 0.0 || g > 1.0) throw UsageError("config: discounts and lambda must lie in [0, 1]");
  }
  if (ppo.lr <= 0.0) throw UsageError("config: learning rate must be positive");
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "name") {
    c.name = v;
  } else if (key == "env") {
    c.env.id = v;
  } else if (key == "noisy_tv") {
    c.env.noisy_tv = parse_bool(key, v);
  } else if (key == "sticky") {
    c.env.sticky = parse_double(key, v);
  } else if (key == "intrinsic") {
    try {
      c.variant = intrinsic::parse_variant(v);
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
  } else if (key == "beta") {
    if (v.empty() || v == "none") c.beta.reset();
    else c.beta = parse_double(key, v);
  } else if (key == "seeds") {
    c.seeds.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) c.seeds.push_back(parse_uint(key, trim(item)));
  } else if (key == "frames") {
    c.total_frames = parse_uint(key, v);
  } else if (key == "rollout_length") {
    c.rollout_length = parse_uint(key, v);
  } else if (key == "num_envs") {
    c.num_envs = parse_uint(key, v);
  } else if (key == "epochs") {
    c.ppo.epochs = parse_uint(key, v);
  } else if (key == "minibatch") {
    c.ppo.minibatch = parse_uint(key, v);
  } else if (key == "lr") {
    c.ppo.lr = parse_double(key, v);
  } else if (key == "entropy_coef") {
    c.ppo.entropy_coef = parse_double(key, v);
  } else if (key == "value_coef") {
    c.ppo.value_coef = parse_double(key, v);
  } else if (key == "clip_low") {
    c.ppo.clip_low = parse_double(key, v);
  } else if (key == "clip_high") {
    c.ppo.clip_high = parse_double(key, v);
  } else if (key == "gamma_e") {
    c.gamma_e = parse_double(key, v);
  } else if (key == "gamma_i") {
    c.gamma_i = parse_double(key, v);
  } else if (key == "lambda") {
    c.lambda = parse_double(key, v);
  } else if (key == "zero_extrinsic") {
    c.zero_extrinsic = parse_bool(key, v);
  } else if (key == "wallclock") {
    c.record_wallclock = parse_bool(key, v);
  } else if (key == "out") {
    c.out_dir = v;
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& is, ExperimentConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value', got '" + t + "'");
    apply_setting(base, trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config file " + path.string());
  return parse_config(is, std::move(base));
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "name = " << c.name << "\n";
  os << "env = " << c.env.id << "\n";
  os << "noisy_tv = " << (c.env.noisy_tv ? "true" : "false") << "\n";
  os << "sticky = " << fmt(c.env.sticky) << "\n";
  os << "intrinsic = " << intrinsic::variant_name(c.variant) << "\n";
  os << "beta = " << (c.beta ? fmt(*c.beta) : std::string("none")) << "\n";
  os << "seeds = ";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) os << (i ? "," : "") << c.seeds[i];
  os << "\n";
  os << "frames = " << c.total_frames << "\n";
  os << "rollout_length = " << c.rollout_length << "\n";
  os << "num_envs = " << c.num_envs << "\n";
  os << "epochs = " << c.ppo.epochs << "\n";
  os << "minibatch = " << c.ppo.minibatch << "\n";
  os << "lr = " << fmt(c.ppo.lr) << "\n";
  os << "entropy_coef = " << fmt(c.ppo.entropy_coef) << "\n";
  os << "value_coef = " << fmt(c.ppo.value_coef) << "\n";
  os << "clip_low = " << fmt(c.ppo.clip_low) << "\n";
  os << "clip_high = " << fmt(c.ppo.clip_high) << "\n";
  os << "gamma_e = " << fmt(c.gamma_e) << "\n";
  os << "gamma_i = " << fmt(c.gamma_i) << "\n";
  os << "lambda = " << fmt(c.lambda) << "\n";
  os << "zero_extrinsic = " << (c.zero_extrinsic ? "true" : "false") << "\n";
  os << "wallclock = " << (c.record_wallclock ? "true" : "false") << "\n";
  os << "out = " << c.out_dir.string() << "\n";
  return os.str();
}

std::uint64_t round_up_frames(std::uint64_t frames, std::uint64_t step) {
  if (step == 0) throw InvalidInput("round_up_frames: zero step");
  return (frames + step - 1) / step * step;
}

}  // namespace curio::harness
