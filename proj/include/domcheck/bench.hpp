#pragma once

#include <optional>
#include <string>
#include <vector>

#include "domcheck/engine.hpp"

namespace domcheck {

struct RunRecord {
  std::string task;
  std::string config;
  Outcome outcome = Outcome::Unknown;
  std::optional<Outcome> expected;
  bool correct = false;
  double cpu_seconds = 0;
  std::size_t reached_states = 0;
  std::size_t bdd_peak_nodes = 0;
  std::string limits_hit;  // cpu, states, nodes, crash, or empty
  std::string error;
};

struct BenchOptions {
  std::vector<Config> configs = all_configs();
  double timeout = 900.0;
  std::size_t jobs = 1;
  bool isolate = false;        // run each task in a forked child
  WaitlistOrder waitlist = WaitlistOrder::Dfs;
  unsigned bv_width = 32;
  Limits limits;               // cpu_seconds is replaced by `timeout`
};

/// `.mc` files of a directory, sorted by name.
std::vector<std::string> list_tasks(const std::string& dir);

/// TRUE/FALSE from the sidecar `<task>.expect`, if present.
std::optional<Outcome> read_expectation(const std::string& task_path);

/// Parses, lowers, types and verifies one file. Never throws.
RunRecord run_task(const std::string& path, Config config, const BenchOptions& opt);

/// One record per (task, config), in task-major order.
std::vector<RunRecord> run_bench(const std::vector<std::string>& tasks, const BenchOptions& opt);

void write_results_csv(const std::string& path, const std::vector<RunRecord>& records);
/// Times of the correct runs of `config`, ascending.
std::vector<double> quantile(const std::vector<RunRecord>& records, const std::string& config);
void write_quantile_csv(const std::string& path, const std::vector<double>& times);

/// The locks-family program with k lock/flag pairs.
std::string generate_locks(int k);

}  // namespace domcheck
