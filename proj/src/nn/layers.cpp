#include "curio/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "curio/error.hpp"
#include "curio/nn/ops.hpp"

namespace curio::nn {

Linear::Linear(std::size_t in, std::size_t out)
    : weight(Tensor::zeros({in, out}, true)), bias(Tensor::zeros({out}, true)) {}

Tensor Linear::operator()(const Tensor& x) const { return linear(x, weight, bias); }

void Linear::append_params(ParamList& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

void init_uniform(Linear& layer, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in_features()));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& w : layer.weight.data()) w = dist(rng);
  for (double& b : layer.bias.data()) b = dist(rng);
}

void init_orthogonal(Linear& layer, double gain, std::mt19937_64& rng) {
  // Gram-Schmidt on the longer side of a Gaussian matrix, then transpose
  // back if needed; rows (or columns) come out orthonormal.
  const std::size_t rows = layer.in_features(), cols = layer.out_features();
  const bool tall = rows >= cols;
  const std::size_t n = tall ? rows : cols;  // vector length
  const std::size_t k = tall ? cols : rows;  // number of vectors
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> basis;
  basis.reserve(k);
  while (basis.size() < k) {
    std::vector<double> v(n);
    for (double& x : v) x = gauss(rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += v[i] * b[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * b[i];
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-10) continue;
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  auto w = layer.weight.data();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) w[r * cols + c] = gain * (tall ? basis[c][r] : basis[r][c]);
  std::fill(layer.bias.data().begin(), layer.bias.data().end(), 0.0);
}

std::vector<Tensor> tensors_of(const ParamList& params) {
  std::vector<Tensor> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.tensor);
  return out;
}

std::size_t parameter_count(const ParamList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.tensor.size();
  return n;
}

void copy_params(const ParamList& src, const ParamList& dst) {
  if (src.size() != dst.size()) throw InvalidInput("copy_params: parameter count mismatch");
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].tensor.shape() != dst[i].tensor.shape())
      throw InvalidInput("copy_params: shape mismatch for " + src[i].name);
    auto s = src[i].tensor.data();
    Tensor target = dst[i].tensor;  // shares storage
    auto d = target.data();
    std::copy(s.begin(), s.end(), d.begin());
  }
}

}  // namespace curio::nn
