#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "curio/nn/tensor.hpp"

namespace curio::nn {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

using ParamList = std::vector<NamedTensor>;

/// Fully connected layer, weight stored [in, out].
struct Linear {
  Tensor weight;
  Tensor bias;

  Linear() = default;
  Linear(std::size_t in, std::size_t out);

  std::size_t in_features() const { return weight.rows(); }
  std::size_t out_features() const { return weight.cols(); }

  Tensor operator()(const Tensor& x) const;
  void append_params(ParamList& out, const std::string& prefix) const;
};

/// U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and bias.
void init_uniform(Linear& layer, std::mt19937_64& rng);
/// Orthogonal weights scaled by gain, zero bias.
void init_orthogonal(Linear& layer, double gain, std::mt19937_64& rng);

std::vector<Tensor> tensors_of(const ParamList& params);
std::size_t parameter_count(const ParamList& params);
/// Copies values from src into dst; names and shapes must agree.
void copy_params(const ParamList& src, const ParamList& dst);

}  // namespace curio::nn
