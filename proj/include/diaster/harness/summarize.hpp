#pragma once

#include <string>

namespace diaster::harness {

/// Aggregates every metrics file under `run_dir` into a tab-separated table
/// ("summary.v1"): one row per (group, env_step) with the seed count, mean
/// return and standard error sqrt(sum (x - mean)^2 / (n (n - 1))). Groups
/// are method_m<m> plus any sweep variant tag. Evaluation grids that do not
/// align leave gaps visible through the n column. Returns the table text
/// and, when out_path is nonempty, writes it there.
std::string summarize(const std::string& run_dir, const std::string& out_path = "");

}  // namespace diaster::harness
