// Command-line front end: train, noise, coverage, eval.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "curio/error.hpp"
#include "curio/harness/config.hpp"
#include "curio/harness/metrics.hpp"
#include "curio/harness/runner.hpp"
#include "curio/nn/checkpoint.hpp"
#include "curio/noise.hpp"
#include "curio/seeding.hpp"

namespace fs = std::filesystem;
using namespace curio;

namespace {

struct TrainFlags {
  std::string config_path;
  std::optional<std::string> env, intrinsic, name, out;
  std::optional<double> beta, sticky;
  std::optional<std::uint64_t> seed, frames;
  bool noisy_tv = false;
  bool zero_extrinsic = false;
  bool wallclock = false;
};

int cmd_train(const TrainFlags& f) {
  harness::ExperimentConfig config;
  if (!f.config_path.empty()) config = harness::load_config(f.config_path);
  if (f.env) config.env.id = *f.env;
  if (f.intrinsic) harness::apply_setting(config, "intrinsic", *f.intrinsic);
  if (f.beta) config.beta = *f.beta;
  if (f.noisy_tv) config.env.noisy_tv = true;
  if (f.sticky) config.env.sticky = *f.sticky;
  if (f.seed) config.seeds = {*f.seed};
  if (f.frames) config.total_frames = *f.frames;
  if (f.zero_extrinsic) config.zero_extrinsic = true;
  if (f.wallclock) config.record_wallclock = true;
  if (f.out) config.out_dir = *f.out;
  if (f.name) {
    config.name = *f.name;
  } else if (f.config_path.empty() || config.name == "run") {
    config.name = config.env.id + (config.env.noisy_tv ? "_noisytv" : "") + "_" + intrinsic::variant_name(config.variant);
  }
  config.validate();

  std::cout << "training " << config.name << ": " << config.env.id << ", " << intrinsic::variant_name(config.variant)
            << ", " << config.num_rollouts() << " rollouts per seed\n";
  harness::RunHooks hooks;
  const std::uint64_t report_every = std::max<std::uint64_t>(1, config.num_rollouts() / 10);
  hooks.on_row = [&](const harness::MetricsRow& row) {
    if ((row.frame / config.frames_per_rollout()) % report_every == 0) {
      std::printf("seed %llu frame %llu return %.3f intrinsic %.4f entropy %.3f\n",
                  static_cast<unsigned long long>(row.seed), static_cast<unsigned long long>(row.frame),
                  row.mean_return, row.mean_intrinsic, row.entropy);
      std::fflush(stdout);
    }
  };
  const auto result = harness::run(config, hooks);
  if (result.rows.size() >= 10 * config.seeds.size()) {
    std::printf("normalized average return: %.4f\n", harness::normalized_average_return(result.rows));
  }
  std::cout << "wrote " << result.run_dir.string() << "\n";
  return 0;
}

struct NoiseFlags {
  double beta = 1.0;
  std::size_t length = 4096;
  std::uint64_t seed = 1;
  std::size_t ensemble = 1;
  std::string out;
};

int cmd_noise(const NoiseFlags& f) {
  if (f.ensemble == 0) throw UsageError("--ensemble must be at least 1");
  const auto seq = noise::generate(f.beta, f.length, f.seed);
  std::vector<noise::Periodogram> grams;
  const bool spectral = f.length >= 8;
  if (spectral) {
    grams.push_back(noise::periodogram(seq));
    for (std::size_t i = 1; i < f.ensemble; ++i)
      grams.push_back(noise::periodogram(noise::generate(f.beta, f.length, derive_seed(f.seed, {i}))));
  }
  const auto walk = noise::random_walk_2d(f.beta, f.length, f.seed);

  std::ofstream file;
  if (!f.out.empty()) {
    file.open(f.out);
    if (!file) throw std::runtime_error("cannot write " + f.out);
  }
  std::ostream& os = f.out.empty() ? std::cout : file;
  char buf[128];
  os << "index,value\n";
  for (std::size_t i = 0; i < seq.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, seq.values[i]);
    os << buf;
  }
  if (spectral) {
    os << "\nfrequency,power\n";
    const auto& freqs = grams.front().frequencies;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      double p = 0.0;
      for (const auto& g : grams) p += g.power[k];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", freqs[k], p / static_cast<double>(grams.size()));
      os << buf;
    }
  }
  os << "\nstep,x,y\n";
  for (std::size_t i = 0; i < walk.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, walk[i].x, walk[i].y);
    os << buf;
  }
  if (!f.out.empty()) {
    if (spectral) std::printf("fitted PSD slope over %zu sequence(s): %.4f\n", grams.size(), noise::fit_psd_slope(grams));
    std::cout << "wrote " << f.out << "\n";
  }
  return 0;
}

int cmd_coverage(const std::string& run_dir, const std::string& out) {
  const fs::path dir(run_dir);
  const fs::path dest = out.empty() ? dir : fs::path(out);
  const auto map = harness::read_coverage_counts(harness::coverage_counts_path(dir));
  fs::create_directories(dest);
  map.write_csv(dest / "heatmap.csv");
  map.write_pgm(dest / "heatmap.pgm");
  std::size_t visited = 0;
  for (auto c : map.counts()) visited += c > 0 ? 1 : 0;
  std::printf("%dx%d grid, %zu cells visited; wrote %s and %s\n", map.width(), map.height(), visited,
              (dest / "heatmap.csv").string().c_str(), (dest / "heatmap.pgm").string().c_str());
  return 0;
}

struct EvalFlags {
  std::string checkpoint;
  std::string env = "empty8";
  bool noisy_tv = false;
  double sticky = 0.0;
  std::size_t episodes = 20;
  std::uint64_t seed = 1;
  bool sample = false;
};

int cmd_eval(const EvalFlags& f) {
  agent::PolicyNet policy(agent::PolicyDims{}, 0);
  nn::load_checkpoint(f.checkpoint, policy.parameters());
  env::EnvSpec spec{f.env, f.noisy_tv, f.sticky};
  const auto result = harness::evaluate(policy, spec, f.episodes, f.seed, !f.sample);
  std::printf("mean return over %zu episodes: %.4f\n", f.episodes, result.mean_return);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curio: curiosity-driven exploration lab"};
  app.require_subcommand(1);

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "train an agent and write a run directory");
  train->add_option("--config", tf.config_path, "key = value config file")->check(CLI::ExistingFile);
  train->add_option("--env", tf.env, "empty8, empty16, doorkey8, doorkey16, dynobs8, dynobs16");
  train->add_option("--intrinsic", tf.intrinsic, "tecle, icm, rnd or none");
  train->add_option("--beta", tf.beta, "colored-noise exponent (tecle only)");
  train->add_flag("--noisy-tv", tf.noisy_tv, "wrap the environment with a Noisy TV");
  train->add_option("--sticky", tf.sticky, "sticky-action probability");
  train->add_option("--seed", tf.seed, "train a single seed instead of the configured list");
  train->add_option("--frames", tf.frames, "total frames per seed (multiple of 2048 by default)");
  train->add_option("--out", tf.out, "output root directory");
  train->add_option("--name", tf.name, "run directory name");
  train->add_flag("--zero-extrinsic", tf.zero_extrinsic, "hide extrinsic rewards from the learner");
  train->add_flag("--wallclock", tf.wallclock, "record rollout wall-clock time (breaks byte-identical metrics)");

  NoiseFlags nf;
  auto* noise_cmd = app.add_subcommand("noise", "generate colored noise, its periodogram and a random walk");
  noise_cmd->add_option("--beta", nf.beta, "spectral exponent");
  noise_cmd->add_option("--length", nf.length, "sequence length")->check(CLI::PositiveNumber);
  noise_cmd->add_option("--seed", nf.seed, "seed");
  noise_cmd->add_option("--ensemble", nf.ensemble, "number of sequences averaged into the periodogram");
  noise_cmd->add_option("--out", nf.out, "CSV path (stdout when omitted)");

  std::string cov_run, cov_out;
  auto* coverage = app.add_subcommand("coverage", "re-emit heatmaps from a run directory");
  coverage->add_option("run", cov_run, "run directory")->required()->check(CLI::ExistingDirectory);
  coverage->add_option("--out", cov_out, "destination directory (defaults to the run directory)");

  EvalFlags ef;
  auto* eval = app.add_subcommand("eval", "roll out a policy checkpoint");
  eval->add_option("--checkpoint", ef.checkpoint, "policy checkpoint file")->required()->check(CLI::ExistingFile);
  eval->add_option("--env", ef.env, "environment id");
  eval->add_flag("--noisy-tv", ef.noisy_tv, "wrap the environment with a Noisy TV");
  eval->add_option("--sticky", ef.sticky, "sticky-action probability");
  eval->add_option("--episodes", ef.episodes, "number of episodes")->check(CLI::PositiveNumber);
  eval->add_option("--seed", ef.seed, "evaluation seed");
  eval->add_flag("--sample", ef.sample, "sample actions instead of acting greedily");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every other parse failure is a usage error
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train) return cmd_train(tf);
    if (*noise_cmd) return cmd_noise(nf);
    if (*coverage) return cmd_coverage(cov_run, cov_out);
    if (*eval) return cmd_eval(ef);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
