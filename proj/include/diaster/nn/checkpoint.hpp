#pragma once

#include <map>
#include <string>

#include "diaster/nn/param.hpp"

namespace diaster::nn {

/// Flat parameter container (format "diaster-ckpt v1", see docs/FORMATS.md):
/// a text file mapping parameter names to shaped arrays plus free-form
/// metadata. Values are written with 17 significant digits so doubles
/// round-trip exactly and files are stable across runs.
struct Checkpoint {
  std::map<std::string, std::string> meta;
  std::map<std::string, Matrix> tensors;
};

void save_checkpoint(const std::string& path, const ParamList& params,
                     const std::map<std::string, std::string>& meta = {});

Checkpoint load_checkpoint(const std::string& path);

/// Copies tensors into the parameter list by name; throws on a missing name
/// or shape mismatch.
void apply_checkpoint(const Checkpoint& ckpt, const ParamList& params);

}  // namespace diaster::nn
