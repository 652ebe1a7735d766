#pragma once

// Gradient-check fixtures shared by the nn unit tests and the acceptance
// suite. Each case builds small seeded leaf tensors and a scalar loss that
// exercises one op through a random linear functional, so the whole
// Jacobian is probed rather than just its column sums.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "curio/intrinsic/tecle.hpp"
#include "curio/nn/gradcheck.hpp"
#include "curio/nn/layers.hpp"
#include "curio/nn/ops.hpp"

namespace curio::fixtures {

struct GradCase {
  std::string name;
  std::vector<nn::Tensor> params;
  std::function<nn::Tensor()> loss;
  double tolerance = 1e-5;
};

inline nn::Tensor random_leaf(nn::Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0,
                              double min_abs = 0.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(nn::shape_size(shape));
  for (auto& x : v) {
    do x = u(rng);
    while (std::abs(x) < min_abs);
  }
  return nn::Tensor::from(std::move(shape), std::move(v), true);
}

/// sum(y * C) for a fixed random C shaped like y.
inline nn::Tensor probe(const nn::Tensor& y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(y.size());
  for (auto& x : c) x = u(rng);
  return nn::sum(nn::mul(y, nn::Tensor::from(y.shape(), std::move(c))));
}

inline std::vector<GradCase> layer_and_loss_cases() {
  using namespace nn;
  std::vector<GradCase> cases;
  std::mt19937_64 rng(20240);

  auto unary = [&](const std::string& name, std::function<Tensor(const Tensor&)> f, double lo = -1.0,
                   double hi = 1.0, double min_abs = 0.0) {
    Tensor x = random_leaf({3, 4}, rng, lo, hi, min_abs);
    cases.push_back({name, {x}, [x, f] { return probe(f(x), 7); }});
  };
  // Inputs for kinked ops are kept away from the kinks.
  unary("relu", [](const Tensor& x) { return relu(x); }, -1.0, 1.0, 0.05);
  unary("sigmoid", [](const Tensor& x) { return sigmoid(x); }, -3.0, 3.0);
  unary("tanh", [](const Tensor& x) { return tanh(x); }, -2.0, 2.0);
  unary("exp", [](const Tensor& x) { return exp(x); });
  unary("square", [](const Tensor& x) { return square(x); });
  unary("clamp", [](const Tensor& x) { return clamp(x, -0.5, 0.5); }, -1.0, 1.0, 0.0);
  unary("softmax", [](const Tensor& x) { return softmax(x); }, -2.0, 2.0);
  unary("log_softmax", [](const Tensor& x) { return log_softmax(x); }, -2.0, 2.0);
  unary("scale", [](const Tensor& x) { return scale(x, -1.7); });
  unary("add_scalar", [](const Tensor& x) { return square(add_scalar(x, 0.3)); });
  unary("slice_cols", [](const Tensor& x) { return slice_cols(x, 1, 2); });
  unary("sum_rows", [](const Tensor& x) { return sum_rows(x); });
  unary("mean", [](const Tensor& x) { return scale(mean(square(x)), 3.0); });

  auto binary = [&](const std::string& name, std::function<Tensor(const Tensor&, const Tensor&)> f) {
    Tensor a = random_leaf({3, 4}, rng);
    Tensor b = random_leaf({3, 4}, rng);
    cases.push_back({name, {a, b}, [a, b, f] { return probe(f(a, b), 11); }});
  };
  binary("add", [](const Tensor& a, const Tensor& b) { return add(a, b); });
  binary("sub", [](const Tensor& a, const Tensor& b) { return sub(a, b); });
  binary("mul", [](const Tensor& a, const Tensor& b) { return mul(a, b); });
  binary("minimum", [](const Tensor& a, const Tensor& b) { return minimum(a, b); });
  binary("concat_cols", [](const Tensor& a, const Tensor& b) { return concat_cols(a, b); });
  binary("mse", [](const Tensor& a, const Tensor& b) { return mse(a, b); });

  {
    Tensor x = random_leaf({4, 5}, rng);
    Tensor w = random_leaf({5, 3}, rng);
    Tensor b = random_leaf({3}, rng);
    cases.push_back({"linear", {x, w, b}, [x, w, b] { return probe(linear(x, w, b), 13); }});
  }
  {
    // sparse input: zero entries are skipped in the forward pass
    Tensor x = Tensor::from({2, 4}, {0, 1, 0, 0, 1, 0, 0, 1}, true);
    Tensor w = random_leaf({4, 3}, rng);
    Tensor b = random_leaf({3}, rng);
    cases.push_back({"linear_sparse", {x, w, b}, [x, w, b] { return probe(linear(x, w, b), 17); }});
  }
  {
    Tensor x = random_leaf({4, 5}, rng);
    const std::vector<std::size_t> idx{0, 4, 2, 2};
    cases.push_back({"pick", {x}, [x, idx] { return probe(pick(x, idx), 19); }});
  }
  {
    Tensor logits = random_leaf({4, 7}, rng, -2.0, 2.0);
    const std::vector<std::size_t> target{0, 6, 3, 3};
    cases.push_back({"cross_entropy", {logits}, [logits, target] { return cross_entropy(logits, target); }});
  }
  {
    Tensor p = random_leaf({3, 4}, rng, 0.05, 0.95);
    Tensor t = random_leaf({3, 4}, rng, 0.0, 1.0);
    cases.push_back({"bce", {p, t}, [p, t] { return bce(p, t); }});
  }
  {
    Tensor mu = random_leaf({3, 2}, rng);
    Tensor lv = random_leaf({3, 2}, rng);
    cases.push_back({"gaussian_kl", {mu, lv}, [mu, lv] { return gaussian_kl(mu, lv); }});
  }
  {
    Tensor x = random_leaf({3, 4}, rng);
    nn::Linear layer(4, 2);
    nn::init_uniform(layer, rng);
    cases.push_back({"linear_layer", {layer.weight, layer.bias}, [x, layer] { return probe(layer(x), 23); }});
  }
  return cases;
}

/// The complete TeCLE objective on tiny dimensions: inverse cross-entropy
/// plus reconstruction BCE and KL, with the embedding left attached so the
/// check covers every network at once.
inline GradCase full_cvae_case() {
  intrinsic::NetDims dims{6, 5, 4, 2, 3};
  auto model = std::make_shared<intrinsic::Tecle>(intrinsic::TecleConfig{0.0, 3, dims, {}});
  std::mt19937_64 rng(77);
  std::bernoulli_distribution bit(0.4);
  std::normal_distribution<double> gauss;
  auto batch = std::make_shared<intrinsic::TransitionBatch>();
  for (std::size_t r = 0; r < 5; ++r) {
    std::vector<double> s(6), s2(6);
    for (auto& v : s) v = bit(rng) ? 1.0 : 0.0;
    for (auto& v : s2) v = bit(rng) ? 1.0 : 0.0;
    batch->add(s, r % 3, s2, r);
  }
  std::vector<double> eps(5 * 2);
  for (auto& e : eps) e = gauss(rng);
  const nn::Tensor eps_t = nn::Tensor::from({5, 2}, eps);
  const nn::Tensor act = nn::one_hot(batch->actions, 3);

  GradCase c;
  c.name = "full_cvae";
  c.tolerance = 1e-4;
  c.params = nn::tensors_of(model->parameters());
  c.loss = [model, batch, eps_t, act] {
    const nn::Tensor phi_next = model->embed(batch->next_obs_tensor());
    const auto terms = model->cvae_loss(phi_next, act, eps_t);
    return nn::add(model->inverse_loss(*batch), nn::add(terms.recon, terms.kl));
  };
  return c;
}

}  // namespace curio::fixtures
