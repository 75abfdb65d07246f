#include "diaster/env/spec_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace diaster::env {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open env spec: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("env spec: missing '=' in line: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("env spec: empty key in line: " + line);
    if (kv.count(key)) throw std::runtime_error("env spec: duplicate key: " + key);
    kv[key] = value;
  }
  return kv;
}

int get_int(const std::map<std::string, std::string>& kv, const std::string& key, int fallback,
            bool required = false) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    if (required) throw std::runtime_error("env spec: missing required key: " + key);
    return fallback;
  }
  return std::stoi(it->second);
}

bool get_bool(const std::map<std::string, std::string>& kv, const std::string& key, bool fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw std::runtime_error("env spec: boolean expected for " + key);
}

std::vector<double> parse_numbers(const std::string& text) {
  std::istringstream ss(text);
  std::vector<double> out;
  double v;
  while (ss >> v) out.push_back(v);
  return out;
}

EnumeratedMdp parse_custom(const std::map<std::string, std::string>& kv) {
  EnumeratedMdp mdp;
  mdp.n_states = get_int(kv, "n_states", 0, true);
  mdp.n_actions = get_int(kv, "n_actions", 0, true);
  mdp.horizon = get_int(kv, "horizon", 0, true);
  mdp.transition = Matrix::Zero(static_cast<Eigen::Index>(mdp.n_states) * mdp.n_actions, mdp.n_states);
  mdp.hidden_reward = Matrix::Zero(mdp.n_states, mdp.n_actions);
  mdp.initial_dist = Vector::Zero(mdp.n_states);
  mdp.terminal.assign(mdp.n_states, 0);

  auto rho = kv.find("rho0");
  if (rho == kv.end()) throw std::runtime_error("env spec: custom MDP needs rho0");
  auto rho_vals = parse_numbers(rho->second);
  if (static_cast<int>(rho_vals.size()) != mdp.n_states)
    throw std::runtime_error("env spec: rho0 needs n_states entries");
  for (int s = 0; s < mdp.n_states; ++s) mdp.initial_dist(s) = rho_vals[s];

  if (auto t = kv.find("terminal"); t != kv.end())
    for (double v : parse_numbers(t->second)) mdp.terminal.at(static_cast<int>(v)) = 1;

  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      const std::string tkey = "transition " + std::to_string(s) + " " + std::to_string(a);
      if (auto it = kv.find(tkey); it != kv.end()) {
        auto vals = parse_numbers(it->second);
        if (static_cast<int>(vals.size()) != mdp.n_states)
          throw std::runtime_error("env spec: " + tkey + " needs n_states entries");
        for (int s2 = 0; s2 < mdp.n_states; ++s2) mdp.transition(mdp.row(s, a), s2) = vals[s2];
      } else if (!mdp.is_terminal(s)) {
        throw std::runtime_error("env spec: missing " + tkey);
      } else {
        mdp.transition(mdp.row(s, a), s) = 1.0;  // terminal rows default to absorbing
      }
      const std::string rkey = "reward " + std::to_string(s) + " " + std::to_string(a);
      if (auto it = kv.find(rkey); it != kv.end()) mdp.hidden_reward(s, a) = std::stod(it->second);
    }
  }
  return mdp;
}

}  // namespace

EnvInstance make_env(const std::map<std::string, std::string>& kv) {
  auto kind_it = kv.find("kind");
  if (kind_it == kv.end()) throw std::runtime_error("env spec: missing key: kind");
  switch (parse_env_kind(kind_it->second)) {
    case EnvInstance::Kind::kChain:
      return EnvInstance::chain(get_int(kv, "length", 0, true), get_int(kv, "horizon", -1),
                                get_bool(kv, "distractor", false));
    case EnvInstance::Kind::kKeyDoorGrid:
      return EnvInstance::key_door_grid(get_int(kv, "width", 5), get_int(kv, "height", 5),
                                        get_int(kv, "horizon", 0, true), get_int(kv, "start_cell", 0),
                                        get_int(kv, "key_cell", -1), get_int(kv, "door_cell", -1));
    case EnvInstance::Kind::kPointMazeGrid:
      return EnvInstance::point_maze_grid(get_int(kv, "horizon", 16));
    case EnvInstance::Kind::kCustom:
      return EnvInstance::custom(parse_custom(kv));
  }
  throw std::logic_error("unreachable");
}

EnvInstance load_env_spec(const std::string& path) { return make_env(parse_kv_file(path)); }

}  // namespace diaster::env
