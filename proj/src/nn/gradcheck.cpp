#include "curio/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace curio::nn {

GradCheckReport grad_check(std::vector<Tensor> params, const std::function<Tensor()>& loss, double h, double floor) {
  for (auto& p : params) p.zero_grad();
  loss().backward();
  std::vector<std::vector<double>> analytic;
  for (auto& p : params) {
    auto g = p.grad();
    analytic.emplace_back(g.begin(), g.end());
  }

  GradCheckReport report;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    auto w = params[pi].data();
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double orig = w[j];
      w[j] = orig + h;
      const double up = loss().item();
      w[j] = orig - h;
      const double down = loss().item();
      w[j] = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[pi][j];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      if (rel > report.max_rel_error) {
        report = {rel, "param#" + std::to_string(pi), j, a, numeric};
      }
    }
  }
  return report;
}

}  // namespace curio::nn
