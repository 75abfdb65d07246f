#include "diaster/harness/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "diaster/env/spec_io.hpp"

namespace diaster::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::istringstream ss(text);
  std::vector<int> out;
  int v;
  while (ss >> v) out.push_back(v);
  return out;
}

std::vector<uint64_t> parse_seed_list(const std::string& text) {
  std::vector<uint64_t> out;
  std::string piece;
  std::istringstream ss(text);
  while (std::getline(ss, piece, ',')) {
    piece = trim(piece);
    if (!piece.empty()) out.push_back(std::stoull(piece));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: boolean expected for " + key + ", got '" + v + "'");
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key.rfind("env.", 0) == 0) {
    env_kv[key.substr(4)] = value;
    return;
  }
  if (key == "method") method = rd::parse_method(value);
  else if (key == "m") m = std::stoi(value);
  else if (key == "rrd_k") rrd_k = std::stoi(value);
  else if (key == "cut_include_zero") cut_include_zero = parse_bool(key, value);
  else if (key == "psi_state_only") psi_state_only = parse_bool(key, value);
  else if (key == "step_time_feature") step_time_feature = parse_bool(key, value);
  else if (key == "gru_hidden") gru_hidden = std::stoi(value);
  else if (key == "dense_hidden") dense_hidden = parse_int_list(value);
  else if (key == "agent") agent = value;
  else if (key == "agent_hidden") agent_hidden = parse_int_list(value);
  else if (key == "gamma") gamma = std::stod(value);
  else if (key == "lr") lr = std::stod(value);
  else if (key == "q_lr") q_lr = std::stod(value);
  else if (key == "q_init") q_init = std::stod(value);
  else if (key == "eps_start") eps_start = std::stod(value);
  else if (key == "eps_end") eps_end = std::stod(value);
  else if (key == "eps_decay_frac") eps_decay_frac = std::stod(value);
  else if (key == "episodes") episodes = std::stoi(value);
  else if (key == "batches_per_episode") batches_per_episode = std::stoi(value);
  else if (key == "batch_size") batch_size = std::stoi(value);
  else if (key == "buffer_capacity") buffer_capacity = std::stol(value);
  else if (key == "eval_interval") eval_interval = std::stoi(value);
  else if (key == "eval_episodes") eval_episodes = std::stoi(value);
  else if (key == "seeds") seeds = parse_seed_list(value);
  else if (key == "out_dir") out_dir = value;
  else throw std::invalid_argument("config: unknown key: " + key);
}

env::EnvInstance ExperimentConfig::make_env() const {
  if (auto it = env_kv.find("file"); it != env_kv.end()) {
    if (!std::filesystem::exists(it->second))
      throw std::invalid_argument("config: env.file does not exist: " + it->second);
    return env::load_env_spec(it->second);
  }
  return env::make_env(env_kv);
}

void ExperimentConfig::validate() const {
  const auto bad = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument("config: " + key + " " + why);
  };
  if (batch_size < 1) bad("batch_size", "must be at least 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) bad("gamma", "must be in (0, 1]");
  if (lr <= 0.0) bad("lr", "must be positive");
  if (q_lr <= 0.0) bad("q_lr", "must be positive");
  if (episodes < 1) bad("episodes", "must be at least 1");
  if (batches_per_episode < 0) bad("batches_per_episode", "must be nonnegative");
  if (buffer_capacity < 1) bad("buffer_capacity", "must be positive");
  if (eval_interval < 1) bad("eval_interval", "must be at least 1");
  if (eval_episodes < 1) bad("eval_episodes", "must be at least 1");
  if (seeds.empty()) bad("seeds", "must name at least one seed");
  if (rrd_k < 1) bad("rrd_k", "must be at least 1");
  if (gru_hidden < 1) bad("gru_hidden", "must be at least 1");
  if (agent != "tabular" && agent != "dqn") bad("agent", "must be 'tabular' or 'dqn'");
  if (!(eps_decay_frac >= 0.0 && eps_decay_frac <= 1.0)) bad("eps_decay_frac", "must be in [0, 1]");

  const env::EnvInstance probe = make_env();  // also checks env keys / file existence
  const int horizon = probe.horizon();
  if (m < 0 || m > horizon - 1)
    bad("m", "must be in [0, T-1] = [0, " + std::to_string(horizon - 1) + "], got " + std::to_string(m));
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, bool> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: missing '=' at " + origin + ":" + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen[key]) throw std::invalid_argument("config: duplicate key: " + key);
    seen[key] = true;
    cfg.set(key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [k, v] : env_kv) out << "env." << k << " = " << v << "\n";
  out << "method = " << rd::method_name(method) << "\n";
  out << "m = " << m << "\n";
  out << "rrd_k = " << rrd_k << "\n";
  out << "cut_include_zero = " << (cut_include_zero ? "true" : "false") << "\n";
  out << "psi_state_only = " << (psi_state_only ? "true" : "false") << "\n";
  out << "step_time_feature = " << (step_time_feature ? "true" : "false") << "\n";
  out << "gru_hidden = " << gru_hidden << "\n";
  out << "dense_hidden =";
  for (int h : dense_hidden) out << " " << h;
  out << "\n";
  out << "agent = " << agent << "\n";
  out << "agent_hidden =";
  for (int h : agent_hidden) out << " " << h;
  out << "\n";
  out << "gamma = " << gamma << "\n";
  out << "lr = " << lr << "\n";
  out << "q_lr = " << q_lr << "\n";
  out << "q_init = " << q_init << "\n";
  out << "eps_start = " << eps_start << "\n";
  out << "eps_end = " << eps_end << "\n";
  out << "eps_decay_frac = " << eps_decay_frac << "\n";
  out << "episodes = " << episodes << "\n";
  out << "batches_per_episode = " << batches_per_episode << "\n";
  out << "batch_size = " << batch_size << "\n";
  out << "buffer_capacity = " << buffer_capacity << "\n";
  out << "eval_interval = " << eval_interval << "\n";
  out << "eval_episodes = " << eval_episodes << "\n";
  out << "seeds = ";
  for (size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
  out << "\n";
  out << "out_dir = " << out_dir << "\n";
  return out.str();
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("config: cannot write " + path);
  out << cfg.to_text();
}

}  // namespace diaster::harness
