#include "curio/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "curio/error.hpp"

namespace curio::harness {

std::string format_row(const MetricsRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%llu,%llu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.3f",
                static_cast<unsigned long long>(r.frame), static_cast<unsigned long long>(r.seed), r.mean_return,
                r.mean_intrinsic, r.loss_policy, r.loss_value, r.loss_recon, r.loss_kl, r.loss_inverse, r.entropy,
                r.wallclock_s);
  return buf;
}

MetricsRow parse_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (cells.size() != 11) throw InvalidInput("metrics row has " + std::to_string(cells.size()) + " columns: " + line);
  try {
    MetricsRow r;
    r.frame = std::stoull(cells[0]);
    r.seed = std::stoull(cells[1]);
    double* fields[] = {&r.mean_return, &r.mean_intrinsic, &r.loss_policy, &r.loss_value, &r.loss_recon,
                        &r.loss_kl,      &r.loss_inverse,   &r.entropy,     &r.wallclock_s};
    for (std::size_t i = 0; i < 9; ++i) *fields[i] = std::stod(cells[i + 2]);
    return r;
  } catch (const std::logic_error&) {
    throw InvalidInput("malformed metrics row: " + line);
  }
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path) {
  file_ = std::fopen(path.string().c_str(), "w");
  if (!file_) throw std::runtime_error("cannot open metrics file " + path.string());
  std::fprintf(file_, "%s\n", kMetricsHeader);
  std::fflush(file_);
}

MetricsWriter::~MetricsWriter() {
  if (file_) std::fclose(file_);
}

void MetricsWriter::append(const MetricsRow& row) {
  std::fprintf(file_, "%s\n", format_row(row).c_str());
  std::fflush(file_);
}

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot open metrics file " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != kMetricsHeader) throw InvalidInput("unexpected metrics header in " + path.string());
  std::vector<MetricsRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty()) rows.push_back(parse_row(line));
  }
  return rows;
}

void ReturnWindow::push(double episode_return) {
  values_.push_back(episode_return);
  if (values_.size() > capacity_) values_.pop_front();
}

double ReturnWindow::mean() const {
  if (values_.empty()) return 0.0;
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

namespace {

std::size_t fraction_count(std::size_t n, double fraction) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n))));
}

}  // namespace

double tail_mean(std::span<const double> xs, double fraction) {
  if (xs.empty()) throw InvalidInput("tail_mean: empty series");
  const std::size_t k = fraction_count(xs.size(), fraction);
  return std::accumulate(xs.end() - static_cast<std::ptrdiff_t>(k), xs.end(), 0.0) / static_cast<double>(k);
}

double head_mean(std::span<const double> xs, double fraction) {
  if (xs.empty()) throw InvalidInput("head_mean: empty series");
  const std::size_t k = fraction_count(xs.size(), fraction);
  return std::accumulate(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k), 0.0) / static_cast<double>(k);
}

std::vector<std::uint64_t> seeds_in(std::span<const MetricsRow> rows) {
  std::vector<std::uint64_t> seeds;
  for (const auto& r : rows) {
    if (std::find(seeds.begin(), seeds.end(), r.seed) == seeds.end()) seeds.push_back(r.seed);
  }
  return seeds;
}

double normalized_seed_return(std::span<const MetricsRow> rows, std::uint64_t seed, double max_return) {
  if (!(max_return > 0.0)) throw InvalidInput("normalized return: max return must be positive");
  std::vector<double> returns;
  for (const auto& r : rows) {
    if (r.seed == seed) returns.push_back(r.mean_return);
  }
  if (returns.size() < 10)
    throw InvalidInput("normalized return: seed " + std::to_string(seed) + " has " + std::to_string(returns.size()) +
                       " rows, need at least 10");
  return tail_mean(returns) / max_return;
}

double normalized_average_return(std::span<const MetricsRow> rows, double max_return) {
  const auto seeds = seeds_in(rows);
  if (seeds.empty()) throw InvalidInput("normalized return: no metrics rows");
  double total = 0.0;
  for (auto s : seeds) total += normalized_seed_return(rows, s, max_return);
  return total / static_cast<double>(seeds.size());
}

}  // namespace curio::harness
