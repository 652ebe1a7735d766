#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curio/nn/tensor.hpp"

namespace curio::nn {

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Compares reverse-mode gradients of loss() against central differences
/// with step h for every element of every tensor in params. loss() must
/// rebuild the graph on each call. Relative error is
/// |a - n| / max(|a|, |n|, floor); the floor keeps exact zeros from
/// producing spurious ratios.
GradCheckReport grad_check(std::vector<Tensor> params, const std::function<Tensor()>& loss, double h = 1e-5,
                           double floor = 1e-4);

}  // namespace curio::nn
