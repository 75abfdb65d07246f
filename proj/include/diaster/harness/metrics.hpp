#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace diaster::harness {

/// One evaluation row ("diaster.metrics.v1" JSONL schema; every key present
/// for every method, with null for a loss the method does not train).
/// wall_step counts update batches — never wall-clock time, which would
/// break byte-level reproducibility.
struct MetricsRecord {
  long wall_step = 0;
  long env_step = 0;
  int episode = 0;
  double mean_return = 0.0;
  std::optional<double> decomp_loss;
  std::optional<double> step_loss;
  std::optional<double> td_loss;
  std::string method;
  uint64_t seed = 0;

  std::string to_json_line() const;
  static MetricsRecord from_json_line(const std::string& line);
};

using MetricsSink = std::function<void(const MetricsRecord&)>;

/// Appends one JSON object per record, flushing after every write so a
/// killed run loses at most the evaluation in flight.
class MetricsWriter {
 public:
  /// `header_extra` lands in the schema header object (method, seed, m...).
  MetricsWriter(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& header_extra = {});
  void write(const MetricsRecord& rec);

 private:
  std::ofstream out_;
};

struct MetricsFile {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<MetricsRecord> records;
};
MetricsFile read_metrics(const std::string& path);

}  // namespace diaster::harness
