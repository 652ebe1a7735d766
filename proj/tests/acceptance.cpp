// Acceptance suite: one PASS/FAIL line per criterion. Training-based
// criteria run full-length experiments and take tens of minutes on one core.
//
//   acceptance [--only 1,2,6] [--out DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "curio/agent/gae.hpp"
#include "curio/env/coverage.hpp"
#include "curio/env/registry.hpp"
#include "curio/env/wrappers.hpp"
#include "curio/harness/config.hpp"
#include "curio/harness/metrics.hpp"
#include "curio/harness/runner.hpp"
#include "curio/noise.hpp"
#include "curio/nn/ops.hpp"
#include "gae_oracle.hpp"
#include "gradient_cases.hpp"

using namespace curio;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double median3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

fs::path g_out = "acceptance_runs";
const std::vector<std::uint64_t> kSeeds{1, 3, 5};

// ---------------------------------------------------------------- 1

// Ordinary least squares slope of log10 power against log10 frequency,
// dropping the two lowest bins and the top 5% of the spectrum.
double ensemble_slope(double beta) {
  const std::size_t n = 4096, members = 64;
  std::vector<double> mean_power;
  std::vector<double> freq;
  for (std::size_t i = 0; i < members; ++i) {
    const auto p = noise::periodogram(noise::generate(beta, n, 1000 + i));
    if (mean_power.empty()) {
      mean_power.assign(p.power.size(), 0.0);
      freq = p.frequencies;
    }
    for (std::size_t k = 0; k < p.power.size(); ++k) mean_power[k] += p.power[k] / members;
  }
  std::vector<double> xs, ys;
  const std::size_t positive = freq.size();
  const std::size_t top = positive - static_cast<std::size_t>(std::floor(0.05 * static_cast<double>(positive)));
  for (std::size_t k = 0; k < top; ++k) {
    if (freq[k] <= 0.0) continue;
    xs.push_back(std::log10(freq[k]));
    ys.push_back(std::log10(mean_power[k]));
  }
  xs.erase(xs.begin(), xs.begin() + 2);
  ys.erase(ys.begin(), ys.begin() + 2);
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (double beta : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    const double slope = ensemble_slope(beta);
    ok = ok && std::abs(slope + beta) <= 0.15;
    detail += "beta " + fmt("%g", beta) + " slope " + fmt("%.3f", slope) + "; ";
  }
  const double dt = seconds_since(t0);
  ok = ok && dt < 10.0;
  return {ok, detail + "runtime " + fmt("%.1f", dt) + " s"};
}

// ---------------------------------------------------------------- 2

Outcome criterion2() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;

  double worst = 0.0;
  std::string worst_name;
  auto cases = fixtures::layer_and_loss_cases();
  for (auto& c : cases) {
    const auto r = nn::grad_check(c.params, c.loss);
    if (r.max_rel_error >= c.tolerance) {
      ok = false;
      detail += c.name + " rel err " + fmt("%.2e", r.max_rel_error) + "; ";
    }
    if (r.max_rel_error > worst) {
      worst = r.max_rel_error;
      worst_name = c.name;
    }
  }
  detail += std::to_string(cases.size()) + " layer/loss checks, worst " + worst_name + " " + fmt("%.1e", worst) + "; ";

  auto cvae = fixtures::full_cvae_case();
  const double cvae_err = nn::grad_check(cvae.params, cvae.loss).max_rel_error;
  ok = ok && cvae_err < 1e-4;
  detail += "full CVAE " + fmt("%.1e", cvae_err) + "; ";

  // Monte-Carlo KL(q || N(0, I)) with 1e5 draws from q.
  const std::vector<double> mu{0.4, -1.1, 0.25}, lv{0.3, -0.7, -1.5};
  const double analytic = nn::gaussian_kl(nn::Tensor::from({1, 3}, mu), nn::Tensor::from({1, 3}, lv)).item();
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double lr = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      const double sd = std::exp(0.5 * lv[j]);
      const double e = g(rng);
      const double z = mu[j] + sd * e;
      lr += -0.5 * e * e - std::log(sd) + 0.5 * z * z;
    }
    s += lr;
    s2 += lr * lr;
  }
  const double mc = s / n, se = std::sqrt((s2 / n - mc * mc) / n);
  const double z_score = std::abs(mc - analytic) / se;
  ok = ok && z_score < 3.0;
  detail += "KL analytic " + fmt("%.4f", analytic) + " vs MC " + fmt("%.4f", mc) + " (" + fmt("%.2f", z_score) + " SE); ";

  std::mt19937_64 grng(99);
  double gae_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = fixtures::random_gae_instance(grng);
    const auto out = agent::gae(inst.rewards, inst.values, inst.bootstrap, inst.dones, inst.gamma, inst.lambda,
                                inst.episodic);
    const auto oracle = fixtures::gae_bruteforce(inst.rewards, inst.values, inst.bootstrap, inst.dones, inst.gamma,
                                                 inst.lambda, inst.episodic);
    for (std::size_t t = 0; t < oracle.size(); ++t) gae_err = std::max(gae_err, std::abs(out.advantages[t] - oracle[t]));
  }
  ok = ok && gae_err <= 1e-10;
  detail += "GAE max abs err " + fmt("%.1e", gae_err) + " over 100 instances; ";

  const double dt = seconds_since(t0);
  ok = ok && dt < 60.0;
  return {ok, detail + "runtime " + fmt("%.1f", dt) + " s"};
}

// ---------------------------------------------------------------- training helpers

harness::ExperimentConfig base_config(const std::string& name, const std::string& env, intrinsic::Variant v,
                                      std::optional<double> beta) {
  harness::ExperimentConfig c;
  c.name = name;
  c.env.id = env;
  c.variant = v;
  c.beta = beta;
  c.seeds = kSeeds;
  c.out_dir = g_out;
  return c;
}

struct TrainedRun {
  std::vector<harness::MetricsRow> rows;
  double seconds = 0.0;

  double seed_return(std::uint64_t seed) const { return harness::normalized_seed_return(rows, seed); }
  std::vector<double> series(std::uint64_t seed, double harness::MetricsRow::*field) const {
    std::vector<double> out;
    for (const auto& r : rows)
      if (r.seed == seed) out.push_back(r.*field);
    return out;
  }
};

TrainedRun train(const harness::ExperimentConfig& c, const harness::RunHooks& hooks = {}) {
  c.validate();
  const auto t0 = Clock::now();
  std::fprintf(stderr, "  training %s (%zu seeds x %llu frames)\n", c.name.c_str(), c.seeds.size(),
               static_cast<unsigned long long>(c.total_frames));
  auto hooks_with_progress = hooks;
  hooks_with_progress.on_row = [&](const harness::MetricsRow& row) {
    if (hooks.on_row) hooks.on_row(row);
    if (row.frame % (c.frames_per_rollout() * 50) == 0)
      std::fprintf(stderr, "    seed %llu frame %llu return %.3f\n", static_cast<unsigned long long>(row.seed),
                   static_cast<unsigned long long>(row.frame), row.mean_return);
  };
  TrainedRun out;
  out.rows = harness::run(c, hooks_with_progress).rows;
  out.seconds = seconds_since(t0);
  return out;
}

std::string per_seed(const TrainedRun& run) {
  std::string s;
  for (auto seed : kSeeds) s += fmt("%.3f", run.seed_return(seed)) + (seed == kSeeds.back() ? "" : "/");
  return s;
}

// ---------------------------------------------------------------- 3

Outcome criterion3() {
  const auto run = train(base_config("acc_empty8_tecle2", "empty8", intrinsic::Variant::Tecle, 2.0));
  int good = 0;
  for (auto seed : kSeeds) good += run.seed_return(seed) >= 0.85;
  return {good >= 2, "per-seed normalized return " + per_seed(run) + " (" + std::to_string(good) +
                         "/3 >= 0.85); runtime " + fmt("%.0f", run.seconds) + " s"};
}

// ---------------------------------------------------------------- 4, 5

std::map<std::string, TrainedRun>& noisy_runs() {
  static std::map<std::string, TrainedRun> runs;
  if (runs.empty()) {
    const std::uint64_t frames = harness::round_up_frames(500000, 2048);
    for (const auto& [label, v, beta] : std::vector<std::tuple<std::string, intrinsic::Variant, std::optional<double>>>{
             {"tecle", intrinsic::Variant::Tecle, -1.0},
             {"icm", intrinsic::Variant::Icm, std::nullopt},
             {"rnd", intrinsic::Variant::Rnd, std::nullopt}}) {
      auto c = base_config("acc_doorkey8_noisytv_" + label, "doorkey8", v, beta);
      c.env.noisy_tv = true;
      c.total_frames = frames;
      runs[label] = train(c);
    }
  }
  return runs;
}

Outcome criterion4() {
  auto& runs = noisy_runs();
  std::map<std::string, double> med;
  for (const auto& [label, run] : runs) {
    std::vector<double> finals;
    for (auto seed : kSeeds) finals.push_back(run.seed_return(seed));
    med[label] = median3(finals);
  }
  const bool ok = med["tecle"] - med["icm"] >= 0.2 && med["tecle"] - med["rnd"] >= 0.2 && med["icm"] <= 0.3 &&
                  med["rnd"] <= 0.3;
  std::string detail;
  for (const auto& label : {"tecle", "icm", "rnd"})
    detail += std::string(label) + " median " + fmt("%.3f", med[label]) + " (" + per_seed(runs[label]) + "); ";
  return {ok, detail};
}

Outcome criterion5() {
  auto& runs = noisy_runs();
  int icm_decayed = 0, tecle_kept = 0;
  std::string detail = "last/first 10% intrinsic ratio";
  for (const std::string label : {"icm", "tecle"}) {
    detail += " " + label + ":";
    for (auto seed : kSeeds) {
      const auto xs = runs[label].series(seed, &harness::MetricsRow::mean_intrinsic);
      const double ratio = harness::tail_mean(xs) / harness::head_mean(xs);
      detail += " " + fmt("%.3f", ratio);
      if (label == "icm") icm_decayed += ratio <= 0.25;
      else tecle_kept += ratio >= 0.5;
    }
  }
  const bool ok = icm_decayed >= 2 && tecle_kept >= 2;
  return {ok, detail + "; icm decayed on " + std::to_string(icm_decayed) + "/3, tecle kept on " +
                  std::to_string(tecle_kept) + "/3"};
}

// ---------------------------------------------------------------- 6

Outcome criterion6() {
  env::CoverageMap map(4, 1);
  const std::vector<std::uint64_t> counts{0, 1, 10000, 25000};
  const std::vector<double> expected{1.0, 1.0099, 100.0, 100.0};
  for (int x = 0; x < 4; ++x) map.set_count({x, 0}, counts[static_cast<std::size_t>(x)]);
  const auto heat = map.heatmap();
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < 4; ++i) {
    ok = ok && std::abs(heat[i] - expected[i]) <= 1e-9;
    detail += std::to_string(counts[i]) + " -> " + fmt("%.10g", heat[i]) + "; ";
  }
  return {ok, detail};
}

// ---------------------------------------------------------------- 7

Outcome criterion7() {
  auto e = env::make_env({"empty16", false, 0.25}, 2024);
  auto* sticky = dynamic_cast<env::StickyActions*>(e.get());
  if (!sticky) return {false, "sticky wrapper not outermost"};
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 6);
  e->reset(1);
  std::uint64_t episode = 1;
  bool fresh = true;
  std::size_t eligible = 0, repeats = 0;
  while (eligible < 100000) {
    const auto r = e->step(env::action_from_index(static_cast<std::size_t>(pick(rng))));
    if (!fresh) {
      ++eligible;
      repeats += sticky->last_was_sticky();
    }
    fresh = false;
    if (r.done()) {
      e->reset(++episode);
      fresh = true;
    }
  }
  const double n = static_cast<double>(eligible);
  const double rate = static_cast<double>(repeats) / n;
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  const bool ok = std::abs(rate - 0.25) <= 3.0 * sigma;
  return {ok, "repeat rate " + fmt("%.5f", rate) + " over " + std::to_string(eligible) + " steps, 3 sigma = " +
                  fmt("%.5f", 3.0 * sigma)};
}

// ---------------------------------------------------------------- 8

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion8() {
  bool ok = true;
  std::string detail;
  // Short configs exercising every intrinsic module, both wrappers and all world types.
  const std::vector<std::string> configs{
      "--env doorkey8 --noisy-tv --sticky 0.25 --intrinsic tecle --beta -1",
      "--env dynobs8 --intrinsic icm",
      "--env empty8 --noisy-tv --intrinsic rnd --zero-extrinsic",
  };
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::string csv[2];
    for (int rep = 0; rep < 2; ++rep) {
      const std::string name = "acc_det" + std::to_string(i) + "_" + std::to_string(rep);
      const std::string cmd = std::string(CURIO_CLI_PATH) + " train " + configs[i] +
                              " --seed 3 --frames 8192 --out " + g_out.string() + " --name " + name + " >/dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "train command failed: " + cmd};
      csv[rep] = slurp(g_out / name / "metrics.csv");
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    ok = ok && same;
    detail += "config " + std::to_string(i + 1) + (same ? " identical" : " DIFFERS") + " (" +
              std::to_string(csv[0].size()) + " bytes); ";
  }
  return {ok, detail};
}

// ---------------------------------------------------------------- 9

Outcome criterion9() {
  auto c = base_config("acc_empty8_tecle2_zero_ext", "empty8", intrinsic::Variant::Tecle, 2.0);
  c.zero_extrinsic = true;
  bool plumbing = true;
  std::size_t episodes = 0;
  double env_total = 0.0;
  std::vector<double> running(c.num_envs, 0.0);
  harness::RunHooks hooks;
  hooks.on_rollout = [&](const harness::RolloutRecord& rec) {
    if (rec.rollout_index == 0) std::fill(running.begin(), running.end(), 0.0);
    std::vector<double> expected;
    for (std::size_t i = 0; i < rec.env_rewards.size(); ++i) {
      plumbing = plumbing && rec.learner_rewards[i] == 0.0;
      running[i % c.num_envs] += rec.env_rewards[i];
      env_total += rec.env_rewards[i];
      if (rec.dones[i]) {
        expected.push_back(running[i % c.num_envs]);
        running[i % c.num_envs] = 0.0;
      }
    }
    plumbing = plumbing && expected == rec.finished_returns;
    episodes += expected.size();
  };
  const auto run = train(c, hooks);
  int good = 0;
  for (auto seed : kSeeds) good += run.seed_return(seed) > 0.3;
  const bool ok = plumbing && env_total > 0.0 && good >= 1;
  return {ok, std::string("learner r_e all zero and logged returns match env rewards: ") + (plumbing ? "yes" : "NO") +
                  " (" + std::to_string(episodes) + " episodes, env reward total " + fmt("%.1f", env_total) +
                  "); per-seed normalized return " + per_seed(run) + " (" + std::to_string(good) +
                  "/3 > 0.3); runtime " + fmt("%.0f", run.seconds) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
    } else if (arg == "--out" && i + 1 < argc) {
      g_out = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only 1,2,...] [--out DIR]\n");
      return 2;
    }
  }

  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
