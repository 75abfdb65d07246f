#include "diaster/nn/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace diaster::nn {

namespace {
constexpr const char* kMagic = "diaster-ckpt v1";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void save_checkpoint(const std::string& path, const ParamList& params,
                     const std::map<std::string, std::string>& meta) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << kMagic << "\n";
  for (const auto& [k, v] : meta) out << "meta " << k << " " << v << "\n";
  for (const Param* p : params) {
    out << "param " << p->name << " " << p->value.rows() << " " << p->value.cols() << "\n";
    for (Eigen::Index i = 0; i < p->value.rows(); ++i) {
      for (Eigen::Index j = 0; j < p->value.cols(); ++j) {
        if (j) out << " ";
        out << format_double(p->value(i, j));
      }
      out << "\n";
    }
  }
  out << "end\n";
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  Checkpoint ckpt;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "end") break;
    if (word == "meta") {
      std::string key;
      ls >> key;
      std::string rest;
      std::getline(ls, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
      ckpt.meta[key] = rest;
    } else if (word == "param") {
      std::string name;
      Eigen::Index rows = 0, cols = 0;
      ls >> name >> rows >> cols;
      if (name.empty() || rows <= 0 || cols <= 0)
        throw std::runtime_error("load_checkpoint: malformed param header: " + line);
      Matrix m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
          if (!(in >> m(i, j))) throw std::runtime_error("load_checkpoint: truncated data for " + name);
      in.ignore();  // trailing newline
      ckpt.tensors[name] = std::move(m);
    } else {
      throw std::runtime_error("load_checkpoint: unexpected line: " + line);
    }
  }
  return ckpt;
}

void apply_checkpoint(const Checkpoint& ckpt, const ParamList& params) {
  for (Param* p : params) {
    auto it = ckpt.tensors.find(p->name);
    if (it == ckpt.tensors.end())
      throw std::runtime_error("apply_checkpoint: missing tensor " + p->name);
    if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols())
      throw std::runtime_error("apply_checkpoint: shape mismatch for " + p->name);
    p->value = it->second;
  }
}

}  // namespace diaster::nn
