#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curio/error.hpp"
#include "curio/harness/config.hpp"
#include "curio/harness/metrics.hpp"
#include "curio/harness/runner.hpp"

using namespace curio;
using namespace curio::harness;
namespace fs = std::filesystem;

namespace {

// 64 frames per rollout keeps a handful of rollouts under a second.
ExperimentConfig tiny_config(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.env.id = "empty8";
  c.variant = intrinsic::Variant::Tecle;
  c.beta = 1.0;
  c.seeds = {1};
  c.rollout_length = 16;
  c.num_envs = 4;
  c.total_frames = 3 * 64;
  c.ppo.minibatch = 32;
  c.out_dir = fs::temp_directory_path() / "curio_harness_test";
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<MetricsRow> rows_for(std::uint64_t seed, const std::vector<double>& returns) {
  std::vector<MetricsRow> rows;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    MetricsRow r;
    r.frame = (i + 1) * 2048;
    r.seed = seed;
    r.mean_return = returns[i];
    rows.push_back(r);
  }
  return rows;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CURIO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, DefaultsAreValidExceptForMissingBeta) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.total_frames % c.frames_per_rollout(), 0u);
  c.variant = intrinsic::Variant::Tecle;
  EXPECT_THROW(c.validate(), UsageError);
  c.beta = -1.0;
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesKeyValueText) {
  std::istringstream in(
      "# comment\n"
      "name = dk\n"
      "env = doorkey8\n"
      "noisy_tv = true\n"
      "intrinsic = tecle\n"
      "beta = -1\n"
      "seeds = 1,3,5\n"
      "\n"
      "frames = 501760\n"
      "zero_extrinsic = yes\n");
  const auto c = parse_config(in);
  EXPECT_EQ(c.name, "dk");
  EXPECT_EQ(c.env.id, "doorkey8");
  EXPECT_TRUE(c.env.noisy_tv);
  EXPECT_EQ(c.variant, intrinsic::Variant::Tecle);
  EXPECT_EQ(*c.beta, -1.0);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{1, 3, 5}));
  EXPECT_EQ(c.total_frames, 501760u);
  EXPECT_TRUE(c.zero_extrinsic);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, FormatRoundTrips) {
  auto c = tiny_config("round");
  c.ppo.lr = 3e-4;
  c.gamma_i = 0.995;
  c.env.sticky = 0.25;
  std::istringstream in(format_config(c));
  const auto back = parse_config(in);
  EXPECT_EQ(format_config(back), format_config(c));
  EXPECT_EQ(back.ppo.lr, 3e-4);
  EXPECT_EQ(back.env.sticky, 0.25);
}

TEST(Config, RejectsBadInput) {
  ExperimentConfig c;
  EXPECT_THROW(apply_setting(c, "colour", "red"), UsageError);
  EXPECT_THROW(apply_setting(c, "frames", "lots"), UsageError);
  EXPECT_THROW(apply_setting(c, "lr", "0.1x"), UsageError);
  EXPECT_THROW(apply_setting(c, "noisy_tv", "maybe"), UsageError);

  c.total_frames = 200000;
  try {
    c.validate();
    FAIL() << "indivisible frame count accepted";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("200704"), std::string::npos) << e.what();
  }
  c = ExperimentConfig{};
  c.env.id = "lava9";
  EXPECT_THROW(c.validate(), UsageError);
  c = ExperimentConfig{};
  c.env.sticky = 1.0;
  EXPECT_THROW(c.validate(), UsageError);
  c = ExperimentConfig{};
  c.beta = 2.0;  // beta without tecle
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(Config, RoundsFramesUp) {
  EXPECT_EQ(round_up_frames(200000, 2048), 200704u);
  EXPECT_EQ(round_up_frames(500000, 2048), 501760u);
  EXPECT_EQ(round_up_frames(4096, 2048), 4096u);
}

TEST(Metrics, RowRoundTrip) {
  MetricsRow r{4096, 3, 0.25, 0.125, -0.01, 0.5, 7.25, 1.5, 1.9, 1.8, 0.0};
  const auto back = parse_row(format_row(r));
  EXPECT_EQ(back.frame, 4096u);
  EXPECT_EQ(back.seed, 3u);
  EXPECT_EQ(back.mean_return, 0.25);
  EXPECT_EQ(back.loss_recon, 7.25);
  EXPECT_THROW(parse_row("1,2,3"), InvalidInput);
}

TEST(Metrics, WriterEmitsHeaderAndRows) {
  const auto dir = fs::temp_directory_path() / "curio_metrics_test";
  fs::create_directories(dir);
  {
    MetricsWriter w(dir / "m.csv");
    w.append(MetricsRow{2048, 1});
    w.append(MetricsRow{4096, 1});
  }
  const auto text = slurp(dir / "m.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), kMetricsHeader);
  EXPECT_EQ(read_metrics(dir / "m.csv").size(), 2u);
}

TEST(Metrics, ReturnWindowKeepsLastHundred) {
  ReturnWindow w;
  EXPECT_EQ(w.mean(), 0.0);
  for (int i = 0; i < 150; ++i) w.push(i < 50 ? 0.0 : 1.0);
  EXPECT_EQ(w.size(), 100u);
  EXPECT_EQ(w.mean(), 1.0);
}

TEST(Metrics, NormalizedReturnExamples) {
  EXPECT_DOUBLE_EQ(normalized_average_return(rows_for(1, std::vector<double>(20, 1.0))), 1.0);
  EXPECT_DOUBLE_EQ(normalized_average_return(rows_for(1, std::vector<double>(20, 0.0))), 0.0);
  std::vector<double> ramp;
  for (int i = 0; i < 100; ++i) ramp.push_back(i / 99.0);
  // the last ten of 0..99 / 99 average 94.5 / 99
  EXPECT_NEAR(normalized_average_return(rows_for(1, ramp)), 94.5 / 99.0, 1e-12);
  EXPECT_THROW(normalized_average_return(rows_for(1, std::vector<double>(9, 1.0))), InvalidInput);
}

TEST(Metrics, AveragesAcrossSeeds) {
  auto rows = rows_for(1, std::vector<double>(20, 1.0));
  const auto other = rows_for(5, std::vector<double>(20, 0.5));
  rows.insert(rows.end(), other.begin(), other.end());
  EXPECT_DOUBLE_EQ(normalized_average_return(rows), 0.75);
  EXPECT_DOUBLE_EQ(normalized_seed_return(rows, 5), 0.5);
  EXPECT_EQ(seeds_in(rows), (std::vector<std::uint64_t>{1, 5}));
}

TEST(Metrics, HeadAndTailMeans) {
  const std::vector<double> xs{4, 1, 1, 1, 1, 1, 1, 1, 1, 8};
  EXPECT_EQ(head_mean(xs), 4.0);
  EXPECT_EQ(tail_mean(xs), 8.0);
}

TEST(Runner, OneRolloutProducesOneRow) {
  auto c = tiny_config("one");
  c.total_frames = 64;
  const auto result = run(c);
  ASSERT_EQ(result.rows.size(), 1u);
  EXPECT_EQ(result.rows[0].frame, 64u);
  const auto text = slurp(result.run_dir / "metrics.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_TRUE(fs::exists(policy_checkpoint_path(result.run_dir, 1)));
  EXPECT_TRUE(fs::exists(intrinsic_checkpoint_path(result.run_dir, 1)));
  EXPECT_TRUE(fs::exists(result.run_dir / "heatmap.csv"));
  EXPECT_TRUE(fs::exists(result.run_dir / "config.txt"));
}

TEST(Runner, SameSeedGivesByteIdenticalMetrics) {
  for (auto v : {intrinsic::Variant::Tecle, intrinsic::Variant::Icm, intrinsic::Variant::Rnd}) {
    auto a = tiny_config("det_a");
    a.variant = v;
    if (v != intrinsic::Variant::Tecle) a.beta.reset();
    a.env.noisy_tv = true;
    a.env.sticky = 0.25;
    auto b = a;
    b.name = "det_b";
    const auto ra = run(a), rb = run(b);
    EXPECT_EQ(slurp(ra.run_dir / "metrics.csv"), slurp(rb.run_dir / "metrics.csv")) << intrinsic::variant_name(v);
  }
}

TEST(Runner, ZeroExtrinsicBlanksLearnerRewardsOnly) {
  auto c = tiny_config("zero");
  c.rollout_length = 64;
  c.total_frames = 40 * 256;
  c.zero_extrinsic = true;
  const std::size_t envs = c.num_envs;
  std::vector<double> running(envs, 0.0);
  double env_sum = 0.0;
  std::size_t episodes = 0;
  RunHooks hooks;
  hooks.on_rollout = [&](const RolloutRecord& rec) {
    ASSERT_EQ(rec.env_rewards.size(), rec.learner_rewards.size());
    for (double r : rec.learner_rewards) ASSERT_EQ(r, 0.0);
    // Rebuild episodic returns from the raw environment rewards and compare
    // with what the trainer logged.
    std::vector<double> expected;
    for (std::size_t i = 0; i < rec.env_rewards.size(); ++i) {
      running[i % envs] += rec.env_rewards[i];
      env_sum += rec.env_rewards[i];
      if (rec.dones[i]) {
        expected.push_back(running[i % envs]);
        running[i % envs] = 0.0;
      }
    }
    ASSERT_EQ(rec.finished_returns, expected);
    episodes += expected.size();
  };
  run(c, hooks, false);
  EXPECT_GT(episodes, 0u);
  EXPECT_GT(env_sum, 0.0);
}

TEST(Runner, WithoutFlagLearnerRewardsEqualEnvironmentRewards) {
  auto c = tiny_config("plain");
  c.total_frames = 2 * 64;
  RunHooks hooks;
  hooks.on_rollout = [&](const RolloutRecord& rec) { EXPECT_EQ(rec.env_rewards, rec.learner_rewards); };
  run(c, hooks, false);
}

TEST(Runner, IntrinsicRecordsAreNonNegativeAndAligned) {
  auto c = tiny_config("intr");
  c.total_frames = 64;
  RunHooks hooks;
  hooks.on_rollout = [&](const RolloutRecord& rec) {
    ASSERT_EQ(rec.intrinsic_raw.size(), 64u);
    ASSERT_EQ(rec.intrinsic_normalized.size(), 64u);
    ASSERT_EQ(rec.actions.size(), 64u);
    for (double r : rec.intrinsic_raw) EXPECT_GE(r, 0.0);
  };
  run(c, hooks, false);
}

TEST(Runner, CoverageCountsRoundTrip) {
  auto c = tiny_config("cov");
  c.total_frames = 64;
  const auto result = run(c);
  const auto map = read_coverage_counts(coverage_counts_path(result.run_dir));
  EXPECT_EQ(map.width(), 8);
  std::uint64_t total = 0;
  for (auto n : map.counts()) total += n;
  // one visit per reset plus one per non-terminal step
  EXPECT_GE(total, 64u);
  const auto heat = slurp(result.run_dir / "heatmap.csv");
  const auto dir = fs::temp_directory_path() / "curio_harness_test";
  map.write_csv(dir / "again.csv");
  EXPECT_EQ(slurp(dir / "again.csv"), heat);
}

TEST(Runner, EvaluateReturnsEpisodeScoresInUnitInterval) {
  Trainer t(tiny_config("eval"), 1);
  const auto r = evaluate(t.policy(), {"empty8"}, 3, 7, false);
  ASSERT_EQ(r.returns.size(), 3u);
  for (double x : r.returns) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run_cli("train --env lava9 --intrinsic none --frames 2048"), 2);
  EXPECT_EQ(run_cli("train --env empty8 --intrinsic tecle --frames 2048"), 2);  // beta missing
  EXPECT_EQ(run_cli("train --env empty8 --intrinsic none --frames 1000"), 2);
  EXPECT_EQ(run_cli("noise --beta 1 --length 0"), 2);
  EXPECT_NE(run_cli("frobnicate"), 0);
}

TEST(Cli, NoiseCommandWritesSeries) {
  const auto out = fs::temp_directory_path() / "curio_cli_noise.csv";
  ASSERT_EQ(run_cli("noise --beta 1 --length 256 --seed 3 --out " + out.string()), 0);
  const auto text = slurp(out);
  EXPECT_EQ(text.rfind("index,value\n", 0), 0u);
  EXPECT_NE(text.find("frequency,power"), std::string::npos);
  EXPECT_NE(text.find("step,x,y"), std::string::npos);
}
