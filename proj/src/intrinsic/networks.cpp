#include "curio/intrinsic/networks.hpp"

#include "curio/nn/ops.hpp"

namespace curio::intrinsic {

using nn::Linear;
using nn::Tensor;

namespace {

Linear uniform_layer(std::size_t in, std::size_t out, std::mt19937_64& rng) {
  Linear l(in, out);
  nn::init_uniform(l, rng);
  return l;
}

}  // namespace

EmbeddingNet::EmbeddingNet(const NetDims& d, std::mt19937_64& rng)
    : l1(uniform_layer(d.obs, d.hidden, rng)), l2(uniform_layer(d.hidden, d.feature, rng)) {}

Tensor EmbeddingNet::operator()(const Tensor& obs) const { return nn::sigmoid(l2(nn::relu(l1(obs)))); }

void EmbeddingNet::append_params(nn::ParamList& out, const std::string& prefix) const {
  l1.append_params(out, prefix + ".l1");
  l2.append_params(out, prefix + ".l2");
}

InverseNet::InverseNet(const NetDims& d, std::mt19937_64& rng)
    : l1(uniform_layer(2 * d.feature, d.hidden, rng)), l2(uniform_layer(d.hidden, d.actions, rng)) {}

Tensor InverseNet::operator()(const Tensor& phi, const Tensor& phi_next) const {
  return l2(nn::relu(l1(nn::concat_cols(phi, phi_next))));
}

void InverseNet::append_params(nn::ParamList& out, const std::string& prefix) const {
  l1.append_params(out, prefix + ".l1");
  l2.append_params(out, prefix + ".l2");
}

ForwardNet::ForwardNet(const NetDims& d, std::mt19937_64& rng)
    : l1(uniform_layer(d.feature + d.actions, d.hidden, rng)), l2(uniform_layer(d.hidden, d.feature, rng)) {}

Tensor ForwardNet::operator()(const Tensor& phi, const Tensor& action) const {
  return l2(nn::relu(l1(nn::concat_cols(phi, action))));
}

void ForwardNet::append_params(nn::ParamList& out, const std::string& prefix) const {
  l1.append_params(out, prefix + ".l1");
  l2.append_params(out, prefix + ".l2");
}

Encoder::Encoder(const NetDims& d, std::mt19937_64& rng)
    : l1(uniform_layer(d.feature + d.actions, d.hidden, rng)),
      mu_head(uniform_layer(d.hidden, d.latent, rng)),
      log_var_head(uniform_layer(d.hidden, d.latent, rng)) {}

Encoder::Output Encoder::operator()(const Tensor& phi_next, const Tensor& action) const {
  const Tensor h = nn::relu(l1(nn::concat_cols(phi_next, action)));
  return {mu_head(h), nn::clamp(log_var_head(h), kLogVarMin, kLogVarMax)};
}

void Encoder::append_params(nn::ParamList& out, const std::string& prefix) const {
  l1.append_params(out, prefix + ".l1");
  mu_head.append_params(out, prefix + ".mu");
  log_var_head.append_params(out, prefix + ".log_var");
}

Decoder::Decoder(const NetDims& d, std::mt19937_64& rng)
    : l1(uniform_layer(d.latent + d.actions, d.hidden, rng)), l2(uniform_layer(d.hidden, d.feature, rng)) {}

Tensor Decoder::operator()(const Tensor& z, const Tensor& action) const {
  return nn::sigmoid(l2(nn::relu(l1(nn::concat_cols(z, action)))));
}

void Decoder::append_params(nn::ParamList& out, const std::string& prefix) const {
  l1.append_params(out, prefix + ".l1");
  l2.append_params(out, prefix + ".l2");
}

FeatureMlp::FeatureMlp(const NetDims& d, std::mt19937_64& rng, bool trainable)
    : l1(uniform_layer(d.obs, d.hidden, rng)), l2(uniform_layer(d.hidden, d.feature, rng)) {
  if (!trainable) {
    for (Linear* l : {&l1, &l2}) {
      l->weight = l->weight.clone(false);
      l->bias = l->bias.clone(false);
    }
  }
}

Tensor FeatureMlp::operator()(const Tensor& obs) const { return l2(nn::relu(l1(obs))); }

void FeatureMlp::append_params(nn::ParamList& out, const std::string& prefix) const {
  l1.append_params(out, prefix + ".l1");
  l2.append_params(out, prefix + ".l2");
}

}  // namespace curio::intrinsic
