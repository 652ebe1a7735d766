#include "curio/nn/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "curio/error.hpp"

namespace curio::nn {

namespace {
constexpr const char* kMagic = "curio-checkpoint-v1";
}

void write_checkpoint(std::ostream& os, const ParamList& params) {
  os << kMagic << '\n' << params.size() << '\n';
  char buf[64];
  for (const auto& p : params) {
    os << p.name << ' ' << p.tensor.shape().size();
    for (std::size_t d : p.tensor.shape()) os << ' ' << d;
    for (double v : p.tensor.data()) {
      std::snprintf(buf, sizeof buf, " %a", v);
      os << buf;
    }
    os << '\n';
  }
}

void read_checkpoint(std::istream& is, const ParamList& params) {
  std::string magic;
  std::size_t count = 0;
  if (!(is >> magic) || magic != kMagic) throw InvalidInput("checkpoint: bad header");
  if (!(is >> count) || count != params.size())
    throw InvalidInput("checkpoint: expected " + std::to_string(params.size()) + " tensors");
  for (const auto& p : params) {
    std::string name;
    std::size_t rank = 0;
    if (!(is >> name >> rank) || name != p.name) throw InvalidInput("checkpoint: expected tensor '" + p.name + "'");
    Shape shape(rank);
    for (auto& d : shape) is >> d;
    if (!is || shape != p.tensor.shape()) throw InvalidInput("checkpoint: shape mismatch for '" + p.name + "'");
    Tensor target = p.tensor;
    for (double& v : target.data()) {
      std::string tok;
      if (!(is >> tok)) throw InvalidInput("checkpoint: truncated values for '" + p.name + "'");
      char* end = nullptr;
      v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') throw InvalidInput("checkpoint: malformed value '" + tok + "'");
    }
  }
}

void save_checkpoint(const std::filesystem::path& path, const ParamList& params) {
  std::ofstream os(path);
  if (!os) throw InvalidInput("checkpoint: cannot open " + path.string() + " for writing");
  write_checkpoint(os, params);
}

void load_checkpoint(const std::filesystem::path& path, const ParamList& params) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("checkpoint: cannot open " + path.string());
  read_checkpoint(is, params);
}

}  // namespace curio::nn
