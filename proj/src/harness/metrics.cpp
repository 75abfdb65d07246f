#include "diaster/harness/metrics.hpp"

#include <json.hpp>
#include <stdexcept>

namespace diaster::harness {

using nlohmann::json;

namespace {
constexpr const char* kSchema = "diaster.metrics.v1";

json optional_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}
}  // namespace

std::string MetricsRecord::to_json_line() const {
  json j;
  j["wall_step"] = wall_step;
  j["env_step"] = env_step;
  j["episode"] = episode;
  j["mean_return"] = mean_return;
  j["decomp_loss"] = optional_to_json(decomp_loss);
  j["step_loss"] = optional_to_json(step_loss);
  j["td_loss"] = optional_to_json(td_loss);
  j["method"] = method;
  j["seed"] = seed;
  return j.dump();
}

MetricsRecord MetricsRecord::from_json_line(const std::string& line) {
  const json j = json::parse(line);
  MetricsRecord r;
  r.wall_step = j.at("wall_step").get<long>();
  r.env_step = j.at("env_step").get<long>();
  r.episode = j.at("episode").get<int>();
  r.mean_return = j.at("mean_return").get<double>();
  if (!j.at("decomp_loss").is_null()) r.decomp_loss = j.at("decomp_loss").get<double>();
  if (!j.at("step_loss").is_null()) r.step_loss = j.at("step_loss").get<double>();
  if (!j.at("td_loss").is_null()) r.td_loss = j.at("td_loss").get<double>();
  r.method = j.at("method").get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  return r;
}

MetricsWriter::MetricsWriter(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& header_extra) {
  out_.open(path);
  if (!out_) throw std::runtime_error("MetricsWriter: cannot open " + path);
  json h;
  h["schema"] = kSchema;
  for (const auto& [k, v] : header_extra) h[k] = v;
  out_ << h.dump() << "\n" << std::flush;
}

void MetricsWriter::write(const MetricsRecord& rec) {
  out_ << rec.to_json_line() << "\n" << std::flush;
}

MetricsFile read_metrics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_metrics: cannot open " + path);
  MetricsFile file;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_metrics: empty file " + path);
  const json h = json::parse(line);
  if (!h.contains("schema") || h.at("schema").get<std::string>() != kSchema)
    throw std::runtime_error("read_metrics: unknown schema in " + path);
  for (const auto& [k, v] : h.items())
    file.header.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    file.records.push_back(MetricsRecord::from_json_line(line));
  }
  return file;
}

}  // namespace diaster::harness
