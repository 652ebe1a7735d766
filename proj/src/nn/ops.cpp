#include "curio/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curio/error.hpp"

namespace curio::nn {

using detail::Node;

namespace {

Node& in(Node& n, std::size_t i) { return *n.parents[i]; }

void require_2d(const Tensor& t, const char* op) {
  if (t.shape().size() != 2) throw InvalidInput(std::string(op) + ": expected a 2-D tensor, got " + shape_str(t.shape()));
}

void require_same(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw InvalidInput(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " + shape_str(b.shape()));
}

template <typename F, typename G>
Tensor unary(const Tensor& x, const char* op, F f, G dfdx_from_xy) {
  std::vector<double> y(x.size());
  const auto xd = x.data();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = f(xd[i]);
  return Tensor::make(x.shape(), std::move(y), op, {x}, [dfdx_from_xy](Node& n) {
    Node& a = in(n, 0);
    if (!a.requires_grad) return;
    auto& g = a.ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.grad[i] * dfdx_from_xy(a.data[i], n.data[i]);
  });
}

}  // namespace

Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  require_2d(x, "linear");
  require_2d(weight, "linear");
  const std::size_t batch = x.rows(), nin = x.cols(), nout = weight.cols();
  if (weight.rows() != nin)
    throw InvalidInput("linear: input " + shape_str(x.shape()) + " incompatible with weight " + shape_str(weight.shape()));
  if (bias.shape() != Shape{nout})
    throw InvalidInput("linear: bias " + shape_str(bias.shape()) + " does not match output width " + std::to_string(nout));

  std::vector<double> y(batch * nout);
  const auto xd = x.data();
  const auto wd = weight.data();
  const auto bd = bias.data();
  for (std::size_t i = 0; i < batch; ++i) {
    double* yr = y.data() + i * nout;
    std::copy(bd.begin(), bd.end(), yr);
    for (std::size_t k = 0; k < nin; ++k) {
      const double xv = xd[i * nin + k];
      if (xv == 0.0) continue;
      const double* wr = wd.data() + k * nout;
      for (std::size_t j = 0; j < nout; ++j) yr[j] += xv * wr[j];
    }
  }

  return Tensor::make({batch, nout}, std::move(y), "linear", {x, weight, bias}, [batch, nin, nout](Node& n) {
    Node& xn = in(n, 0);
    Node& wn = in(n, 1);
    Node& bn = in(n, 2);
    const double* dy = n.grad.data();
    if (xn.requires_grad) {
      auto& dx = xn.ensure_grad();
      for (std::size_t i = 0; i < batch; ++i) {
        for (std::size_t k = 0; k < nin; ++k) {
          const double* wr = wn.data.data() + k * nout;
          const double* dyr = dy + i * nout;
          double acc = 0.0;
          for (std::size_t j = 0; j < nout; ++j) acc += dyr[j] * wr[j];
          dx[i * nin + k] += acc;
        }
      }
    }
    if (wn.requires_grad) {
      auto& dw = wn.ensure_grad();
      for (std::size_t i = 0; i < batch; ++i) {
        const double* dyr = dy + i * nout;
        for (std::size_t k = 0; k < nin; ++k) {
          const double xv = xn.data[i * nin + k];
          if (xv == 0.0) continue;
          double* dwr = dw.data() + k * nout;
          for (std::size_t j = 0; j < nout; ++j) dwr[j] += xv * dyr[j];
        }
      }
    }
    if (bn.requires_grad) {
      auto& db = bn.ensure_grad();
      for (std::size_t i = 0; i < batch; ++i)
        for (std::size_t j = 0; j < nout; ++j) db[j] += dy[i * nout + j];
    }
  });
}

Tensor relu(const Tensor& x) {
  return unary(
      x, "relu", [](double v) { return v > 0.0 ? v : 0.0; }, [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Tensor sigmoid(const Tensor& x) {
  return unary(
      x, "sigmoid",
      [](double v) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& x) {
  return unary(
      x, "tanh", [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor exp(const Tensor& x) {
  return unary(
      x, "exp", [](double v) { return std::exp(v); }, [](double, double y) { return y; });
}

Tensor square(const Tensor& x) {
  return unary(
      x, "square", [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Tensor clamp(const Tensor& x, double lo, double hi) {
  if (lo > hi) throw InvalidInput("clamp: lo > hi");
  return unary(
      x, "clamp", [lo, hi](double v) { return std::clamp(v, lo, hi); },
      [lo, hi](double v, double) { return (v >= lo && v <= hi) ? 1.0 : 0.0; });
}

Tensor log_softmax(const Tensor& x) {
  require_2d(x, "log_softmax");
  const std::size_t r = x.rows(), c = x.cols();
  std::vector<double> y(r * c);
  const auto xd = x.data();
  for (std::size_t i = 0; i < r; ++i) {
    const double* xr = xd.data() + i * c;
    const double mx = *std::max_element(xr, xr + c);
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += std::exp(xr[j] - mx);
    const double lse = mx + std::log(s);
    for (std::size_t j = 0; j < c; ++j) y[i * c + j] = xr[j] - lse;
  }
  return Tensor::make(x.shape(), std::move(y), "log_softmax", {x}, [r, c](Node& n) {
    Node& a = in(n, 0);
    if (!a.requires_grad) return;
    auto& g = a.ensure_grad();
    for (std::size_t i = 0; i < r; ++i) {
      double gs = 0.0;
      for (std::size_t j = 0; j < c; ++j) gs += n.grad[i * c + j];
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += n.grad[i * c + j] - std::exp(n.data[i * c + j]) * gs;
    }
  });
}

Tensor softmax(const Tensor& x) {
  require_2d(x, "softmax");
  const std::size_t r = x.rows(), c = x.cols();
  std::vector<double> y(r * c);
  const auto xd = x.data();
  for (std::size_t i = 0; i < r; ++i) {
    const double* xr = xd.data() + i * c;
    const double mx = *std::max_element(xr, xr + c);
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += (y[i * c + j] = std::exp(xr[j] - mx));
    for (std::size_t j = 0; j < c; ++j) y[i * c + j] /= s;
  }
  return Tensor::make(x.shape(), std::move(y), "softmax", {x}, [r, c](Node& n) {
    Node& a = in(n, 0);
    if (!a.requires_grad) return;
    auto& g = a.ensure_grad();
    for (std::size_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += n.grad[i * c + j] * n.data[i * c + j];
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += n.data[i * c + j] * (n.grad[i * c + j] - dot);
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same(a, b, "add");
  std::vector<double> y(a.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = a[i] + b[i];
  return Tensor::make(a.shape(), std::move(y), "add", {a, b}, [](Node& n) {
    for (std::size_t p = 0; p < 2; ++p) {
      Node& t = in(n, p);
      if (!t.requires_grad) continue;
      auto& g = t.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.grad[i];
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same(a, b, "sub");
  std::vector<double> y(a.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = a[i] - b[i];
  return Tensor::make(a.shape(), std::move(y), "sub", {a, b}, [](Node& n) {
    const double sign[2] = {1.0, -1.0};
    for (std::size_t p = 0; p < 2; ++p) {
      Node& t = in(n, p);
      if (!t.requires_grad) continue;
      auto& g = t.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += sign[p] * n.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same(a, b, "mul");
  std::vector<double> y(a.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = a[i] * b[i];
  return Tensor::make(a.shape(), std::move(y), "mul", {a, b}, [](Node& n) {
    Node& x = in(n, 0);
    Node& z = in(n, 1);
    if (x.requires_grad) {
      auto& g = x.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.grad[i] * z.data[i];
    }
    if (z.requires_grad) {
      auto& g = z.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.grad[i] * x.data[i];
    }
  });
}

Tensor minimum(const Tensor& a, const Tensor& b) {
  require_same(a, b, "minimum");
  std::vector<double> y(a.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::min(a[i], b[i]);
  // ties route the gradient to the first argument
  return Tensor::make(a.shape(), std::move(y), "minimum", {a, b}, [](Node& n) {
    Node& x = in(n, 0);
    Node& z = in(n, 1);
    for (std::size_t i = 0; i < n.grad.size(); ++i) {
      const bool first = x.data[i] <= z.data[i];
      Node& t = first ? x : z;
      if (t.requires_grad) t.ensure_grad()[i] += n.grad[i];
    }
  });
}

Tensor scale(const Tensor& x, double c) {
  return unary(
      x, "scale", [c](double v) { return c * v; }, [c](double, double) { return c; });
}

Tensor add_scalar(const Tensor& x, double c) {
  return unary(
      x, "add_scalar", [c](double v) { return v + c; }, [](double, double) { return 1.0; });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw InvalidInput("concat_cols: no inputs");
  const std::size_t r = parts.front().rows();
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const auto& p : parts) {
    require_2d(p, "concat_cols");
    if (p.rows() != r) throw InvalidInput("concat_cols: row count mismatch");
    widths.push_back(p.cols());
    total += p.cols();
  }
  std::vector<double> y(r * total);
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t off = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const auto d = parts[p].data();
      std::copy_n(d.begin() + static_cast<std::ptrdiff_t>(i * widths[p]), widths[p], y.begin() + static_cast<std::ptrdiff_t>(i * total + off));
      off += widths[p];
    }
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return Tensor::make({r, total}, std::move(y), "concat_cols", std::move(inputs), [r, total, widths](Node& n) {
    std::size_t off = 0;
    for (std::size_t p = 0; p < widths.size(); ++p) {
      Node& t = in(n, p);
      if (t.requires_grad) {
        auto& g = t.ensure_grad();
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < widths[p]; ++j) g[i * widths[p] + j] += n.grad[i * total + off + j];
      }
      off += widths[p];
    }
  });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  const Tensor parts[2] = {a, b};
  return concat_cols(std::span<const Tensor>(parts));
}

Tensor slice_cols(const Tensor& x, std::size_t start, std::size_t count) {
  require_2d(x, "slice_cols");
  const std::size_t r = x.rows(), c = x.cols();
  if (count == 0 || start + count > c) throw InvalidInput("slice_cols: range out of bounds");
  std::vector<double> y(r * count);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < count; ++j) y[i * count + j] = x[i * c + start + j];
  return Tensor::make({r, count}, std::move(y), "slice_cols", {x}, [r, c, start, count](Node& n) {
    Node& a = in(n, 0);
    if (!a.requires_grad) return;
    auto& g = a.ensure_grad();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < count; ++j) g[i * c + start + j] += n.grad[i * count + j];
  });
}

Tensor pick(const Tensor& x, std::span<const std::size_t> index) {
  require_2d(x, "pick");
  const std::size_t r = x.rows(), c = x.cols();
  if (index.size() != r) throw InvalidInput("pick: index count does not match rows");
  std::vector<std::size_t> idx(index.begin(), index.end());
  std::vector<double> y(r);
  for (std::size_t i = 0; i < r; ++i) {
    if (idx[i] >= c) throw InvalidInput("pick: index " + std::to_string(idx[i]) + " out of range for width " + std::to_string(c));
    y[i] = x[i * c + idx[i]];
  }
  return Tensor::make({r, 1}, std::move(y), "pick", {x}, [c, idx = std::move(idx)](Node& n) {
    Node& a = in(n, 0);
    if (!a.requires_grad) return;
    auto& g = a.ensure_grad();
    for (std::size_t i = 0; i < idx.size(); ++i) g[i * c + idx[i]] += n.grad[i];
  });
}

Tensor sum(const Tensor& x) {
  double s = 0.0;
  for (double v : x.data()) s += v;
  return Tensor::make({1}, {s}, "sum", {x}, [](Node& n) {
    Node& a = in(n, 0);
    if (!a.requires_grad) return;
    auto& g = a.ensure_grad();
    for (double& v : g) v += n.grad[0];
  });
}

Tensor mean(const Tensor& x) { return scale(sum(x), 1.0 / static_cast<double>(x.size())); }

Tensor sum_rows(const Tensor& x) {
  require_2d(x, "sum_rows");
  const std::size_t r = x.rows(), c = x.cols();
  std::vector<double> y(r, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) y[i] += x[i * c + j];
  return Tensor::make({r, 1}, std::move(y), "sum_rows", {x}, [r, c](Node& n) {
    Node& a = in(n, 0);
    if (!a.requires_grad) return;
    auto& g = a.ensure_grad();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += n.grad[i];
  });
}

Tensor cross_entropy(const Tensor& logits, std::span<const std::size_t> target) {
  require_2d(logits, "cross_entropy");
  if (target.size() != logits.rows()) throw InvalidInput("cross_entropy: target count does not match batch");
  for (std::size_t t : target)
    if (t >= logits.cols()) throw InvalidInput("cross_entropy: target index " + std::to_string(t) + " out of range");
  return scale(sum(pick(log_softmax(logits), target)), -1.0 / static_cast<double>(target.size()));
}

Tensor bce(const Tensor& pred, const Tensor& target) {
  require_same(pred, target, "bce");
  const std::size_t n = pred.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::clamp(pred[i], kBceClamp, 1.0 - kBceClamp);
    const double t = target[i];
    total -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
  }
  return Tensor::make({1}, {total / static_cast<double>(n)}, "bce", {pred, target}, [n](Node& node) {
    Node& pn = in(node, 0);
    Node& tn = in(node, 1);
    const double g0 = node.grad[0] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double raw = pn.data[i];
      const double p = std::clamp(raw, kBceClamp, 1.0 - kBceClamp);
      const double t = tn.data[i];
      if (pn.requires_grad && raw == p) pn.ensure_grad()[i] += g0 * (p - t) / (p * (1.0 - p));
      if (tn.requires_grad) tn.ensure_grad()[i] += g0 * (std::log(1.0 - p) - std::log(p));
    }
  });
}

Tensor gaussian_kl(const Tensor& mu, const Tensor& log_var) {
  require_same(mu, log_var, "gaussian_kl");
  require_2d(mu, "gaussian_kl");
  const std::size_t batch = mu.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) total += mu[i] * mu[i] + std::exp(log_var[i]) - log_var[i] - 1.0;
  const double inv = 0.5 / static_cast<double>(batch);
  return Tensor::make({1}, {total * inv}, "gaussian_kl", {mu, log_var}, [inv](Node& n) {
    Node& m = in(n, 0);
    Node& lv = in(n, 1);
    const double g0 = n.grad[0] * inv;
    if (m.requires_grad) {
      auto& g = m.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += g0 * 2.0 * m.data[i];
    }
    if (lv.requires_grad) {
      auto& g = lv.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += g0 * (std::exp(lv.data[i]) - 1.0);
    }
  });
}

Tensor mse(const Tensor& a, const Tensor& b) { return mean(square(sub(a, b))); }

Tensor one_hot(std::span<const std::size_t> index, std::size_t classes) {
  std::vector<double> y(index.size() * classes, 0.0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= classes) throw InvalidInput("one_hot: index out of range");
    y[i * classes + index[i]] = 1.0;
  }
  return Tensor::from({index.size(), classes}, std::move(y));
}

}  // namespace curio::nn
