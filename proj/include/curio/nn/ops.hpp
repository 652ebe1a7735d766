#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curio/nn/tensor.hpp"

namespace curio::nn {

/// y = x W + b for x [B, in], W [in, out], b [out]. Zero entries of x are
/// skipped in both passes, which makes one-hot observation inputs cheap.
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor exp(const Tensor& x);
Tensor square(const Tensor& x);
/// Elementwise clamp; the gradient is zero where the input was clamped.
Tensor clamp(const Tensor& x, double lo, double hi);

/// Row-wise softmax / log-softmax of a [B, A] tensor.
Tensor softmax(const Tensor& x);
Tensor log_softmax(const Tensor& x);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor minimum(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double c);
Tensor add_scalar(const Tensor& x, double c);

Tensor concat_cols(std::span<const Tensor> parts);
Tensor concat_cols(const Tensor& a, const Tensor& b);
Tensor slice_cols(const Tensor& x, std::size_t start, std::size_t count);
/// out[i, 0] = x[i, index[i]].
Tensor pick(const Tensor& x, std::span<const std::size_t> index);

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
/// [B, A] -> [B, 1]
Tensor sum_rows(const Tensor& x);

/// Mean over the batch of -log softmax(logits)[target].
Tensor cross_entropy(const Tensor& logits, std::span<const std::size_t> target);

inline constexpr double kBceClamp = 1e-7;
/// Mean over all elements of -[t log p + (1 - t) log(1 - p)], p clamped to
/// [1e-7, 1 - 1e-7].
Tensor bce(const Tensor& pred, const Tensor& target);

/// Mean over the batch of KL(N(mu, exp(log_var)) || N(0, I)).
Tensor gaussian_kl(const Tensor& mu, const Tensor& log_var);

/// Mean over all elements of (a - b)^2.
Tensor mse(const Tensor& a, const Tensor& b);

/// One-hot rows for integer labels.
Tensor one_hot(std::span<const std::size_t> index, std::size_t classes);

}  // namespace curio::nn
