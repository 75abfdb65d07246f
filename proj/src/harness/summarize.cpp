#include "diaster/harness/summarize.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "diaster/harness/metrics.hpp"

namespace diaster::harness {

namespace fs = std::filesystem;

std::string summarize(const std::string& run_dir, const std::string& out_path) {
  if (!fs::is_directory(run_dir)) throw std::runtime_error("summarize: not a directory: " + run_dir);

  // group -> env_step -> per-seed returns
  std::map<std::string, std::map<long, std::vector<double>>> table;
  int files = 0;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(run_dir))
    if (entry.path().string().ends_with(".metrics.jsonl")) paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    const MetricsFile mf = read_metrics(path.string());
    std::string method = "?", m = "?", variant;
    for (const auto& [k, v] : mf.header) {
      if (k == "method") method = v;
      else if (k == "m") m = v;
      else if (k == "variant") variant = v;
    }
    std::string group = method + "_m" + m;
    if (!variant.empty()) group += "_" + variant;
    for (const MetricsRecord& rec : mf.records) table[group][rec.env_step].push_back(rec.mean_return);
    ++files;
  }
  if (files == 0) throw std::runtime_error("summarize: no metrics files in " + run_dir);

  std::ostringstream out;
  out.precision(12);
  out << "# summary.v1\n";
  out << "group\tenv_step\tn_seeds\tmean_return\tstderr\n";
  for (const auto& [group, by_step] : table) {
    for (const auto& [step, values] : by_step) {
      const int n = static_cast<int>(values.size());
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= n;
      double se = 0.0;
      if (n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        se = std::sqrt(ss / (static_cast<double>(n) * (n - 1)));
      }
      out << group << "\t" << step << "\t" << n << "\t" << mean << "\t" << se << "\n";
    }
  }
  const std::string text = out.str();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("summarize: cannot write " + out_path);
    f << text;
  }
  return text;
}

}  // namespace diaster::harness
