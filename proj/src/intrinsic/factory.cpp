#include <cmath>

#include "curio/error.hpp"
#include "curio/intrinsic/icm.hpp"
#include "curio/intrinsic/intrinsic.hpp"
#include "curio/intrinsic/rnd.hpp"
#include "curio/intrinsic/tecle.hpp"

namespace curio::intrinsic {

void TransitionBatch::add(std::span<const double> s, std::size_t action, std::span<const double> s_next,
                          std::size_t step) {
  if (obs_size == 0) obs_size = s.size();
  if (s.size() != obs_size || s_next.size() != obs_size) throw InvalidInput("TransitionBatch: observation size mismatch");
  obs.insert(obs.end(), s.begin(), s.end());
  next_obs.insert(next_obs.end(), s_next.begin(), s_next.end());
  actions.push_back(action);
  step_index.push_back(step);
}

nn::Tensor TransitionBatch::obs_tensor() const { return nn::Tensor::from({size(), obs_size}, obs); }
nn::Tensor TransitionBatch::next_obs_tensor() const { return nn::Tensor::from({size(), obs_size}, next_obs); }

TransitionBatch TransitionBatch::subset(std::span<const std::size_t> rows) const {
  TransitionBatch out;
  out.obs_size = obs_size;
  out.obs.reserve(rows.size() * obs_size);
  out.next_obs.reserve(rows.size() * obs_size);
  for (std::size_t r : rows) {
    if (r >= size()) throw InvalidInput("TransitionBatch::subset: row out of range");
    const auto off = static_cast<std::ptrdiff_t>(r * obs_size);
    out.obs.insert(out.obs.end(), obs.begin() + off, obs.begin() + off + static_cast<std::ptrdiff_t>(obs_size));
    out.next_obs.insert(out.next_obs.end(), next_obs.begin() + off,
                        next_obs.begin() + off + static_cast<std::ptrdiff_t>(obs_size));
    out.actions.push_back(actions[r]);
    out.step_index.push_back(step_index[r]);
  }
  return out;
}

std::vector<double> row_squared_distance(const nn::Tensor& a, const nn::Tensor& b) {
  if (a.shape() != b.shape() || a.shape().size() != 2) throw InvalidInput("row_distance: shape mismatch");
  const std::size_t rows = a.rows(), d = a.cols();
  std::vector<double> out(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = a[r * d + i] - b[r * d + i];
      out[r] += diff * diff;
    }
  }
  return out;
}

std::vector<double> row_distance(const nn::Tensor& a, const nn::Tensor& b) {
  auto out = row_squared_distance(a, b);
  for (double& v : out) v = std::sqrt(v);
  return out;
}

Variant parse_variant(const std::string& s) {
  if (s == "tecle") return Variant::Tecle;
  if (s == "icm") return Variant::Icm;
  if (s == "rnd") return Variant::Rnd;
  if (s == "none") return Variant::None;
  throw InvalidInput("unknown intrinsic variant '" + s + "' (expected tecle, icm, rnd, none)");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Tecle: return "tecle";
    case Variant::Icm: return "icm";
    case Variant::Rnd: return "rnd";
    case Variant::None: return "none";
  }
  return "none";
}

std::unique_ptr<IntrinsicModule> make_intrinsic(const IntrinsicConfig& config) {
  nn::AdamConfig adam;
  adam.lr = config.lr;
  switch (config.variant) {
    case Variant::Tecle:
      return std::make_unique<Tecle>(TecleConfig{config.beta, config.seed, NetDims{}, adam});
    case Variant::Icm:
      return std::make_unique<Icm>(IcmConfig{config.seed, NetDims{}, adam});
    case Variant::Rnd:
      return std::make_unique<Rnd>(RndConfig{config.seed, NetDims{}, adam});
    case Variant::None:
      return std::make_unique<NoBonus>();
  }
  throw InvalidInput("make_intrinsic: bad variant");
}

}  // namespace curio::intrinsic
