#pragma once

#include <filesystem>
#include <iosfwd>

#include "curio/nn/layers.hpp"

namespace curio::nn {

// Text checkpoint: a header line, then one record per tensor
//   <name> <rank> <dim>... <value>...
// with values written as C99 hex floats so a save/load cycle is bit-exact.

void write_checkpoint(std::ostream& os, const ParamList& params);
/// Loads into existing tensors; names, order and shapes must match.
void read_checkpoint(std::istream& is, const ParamList& params);

void save_checkpoint(const std::filesystem::path& path, const ParamList& params);
void load_checkpoint(const std::filesystem::path& path, const ParamList& params);

}  // namespace curio::nn
