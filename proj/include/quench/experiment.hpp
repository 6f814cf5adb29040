// Copyright 2026 The Quench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quench/mitigation.hpp"
#include "quench/noise.hpp"
#include "quench/xxz.hpp"

namespace quench {

enum class Workload { Magnetization, Entropy, SweepQem };

struct ConfigError : std::runtime_error {
  ConfigError(int line, const std::string& message)
      : std::runtime_error("config line " + std::to_string(line) + ": " + message),
        line(line) {}
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message), line(0) {}
  int line;
};

struct ExperimentConfig {
  Workload workload = Workload::Magnetization;
  XXZParams params;
  NoiseModel noise;
  MitigationConfig mitigation;
  std::uint64_t shots = 100000;
  int repetitions = 10;
  std::uint64_t seed = 1;
  int n_trajectories = 10;
  std::string out_dir = "results";

  // entropy workload
  int entropy_subsystem = 0;  // first L qubits; 0 defaults to N/2
  int entropy_instances = 60;
  bool entropy_qmp = false;
  std::vector<int> entropy_steps;  // empty: every step 1..M

  static ExperimentConfig parse_file(const std::filesystem::path& path);
  static ExperimentConfig parse(std::istream& is);

  /// Canonical text used for hashing; independent of key order in the source.
  std::string canonical_text() const;
  std::uint64_t config_hash() const;
};

struct SeriesPoint {
  int step = 0;
  double value = 0.0;
  double std_dev = 0.0;
};

/// Named (step, value, std_dev) series bundled from published tables.
struct FixtureTable {
  std::map<std::string, std::vector<SeriesPoint>> series;

  const std::vector<SeriesPoint>& get(const std::string& name) const;
  static FixtureTable load(const std::filesystem::path& path);
};

struct MaeReport {
  struct Row {
    int step;
    double value;
    double reference;
    double abs_error;
  };
  std::vector<Row> rows;
  double mae = 0.0;

  std::string format(const std::string& label) const;
};

/// Per-step absolute differences and their mean; steps must align.
MaeReport compare_fixture(const std::vector<SeriesPoint>& results,
                          const std::vector<SeriesPoint>& reference);

/// Loads the `step,...` results CSV written by the runner, picking the named
/// column.
std::vector<SeriesPoint> load_results_series(const std::filesystem::path& csv,
                                             const std::string& column);

struct RunOutcome {
  std::vector<std::filesystem::path> files;
  std::uint64_t config_hash = 0;
};

/// Executes the configured workload; writes result files and a manifest under
/// config.out_dir. Identical config + seed produce byte-identical result
/// files (the manifest side-file carries the timestamp).
RunOutcome run_experiment(const ExperimentConfig& config, int n_workers);

std::string version_string();

}  // namespace quench
