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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quench/circuit.hpp"
#include "quench/counts.hpp"
#include "quench/state_vector.hpp"

namespace quench {

/// Per-qubit readout confusion: p01 = P(read 1 | true 0), p10 = P(read 0 | true 1).
struct ReadoutConfusion {
  double p01 = 0.0;
  double p10 = 0.0;
};

struct NoiseModel {
  double two_qubit_depol = 0.0;     // probability per CX/CZ
  double two_qubit_coherent = 0.0;  // residual ZZ rotation (radians) per CX/CZ
  double idle_z_rate = 0.0;         // radians per unit idle duration per qubit
  std::vector<ReadoutConfusion> readout;  // per qubit; empty means ideal

  bool has_readout_error() const;
  bool is_noiseless() const;
  void validate() const;

  static NoiseModel noiseless() { return {}; }
  /// Defaults sized to make step-10 circuits visibly degraded but not fully
  /// mixed, with every channel the mitigation methods target present.
  static NoiseModel plausible_defaults(int n_qubits);
  static NoiseModel uniform_readout(int n_qubits, double p01, double p10);

  /// Flat key=value text: p2=, eps2=, idle_z=, readout.q<k>=<column-major 2x2>.
  std::string serialize() const;
  static NoiseModel parse(std::istream& is);
};

/// Replay record: everything needed to rebuild a trajectory's inserted errors.
struct Trajectory {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  struct Insertion {
    int layer = 0;
    int gate = 0;   // index within the layer
    int pauli = 0;  // 1..15; low 2 bits act on the gate's q0, high on q1
  };
  std::vector<Insertion> inserted_errors;
};

struct TrajectoryResult {
  CountsHistogram counts;
  Trajectory trajectory;
};

/// Monte Carlo noisy execution. Per trajectory: after every CX/CZ, with
/// probability p2 insert a uniformly random non-identity two-qubit Pauli,
/// then apply Rzz(eps2); idle (qubit, layer) windows of duration tau pick up
/// Rz(idle_z_rate * tau); measurement goes through the readout confusion.
/// shots must divide evenly across n_trajectories.
std::vector<TrajectoryResult> noisy_execute_trajectories(
    const Circuit& circuit, const StateVector& initial, const NoiseModel& noise,
    std::uint64_t shots, int n_trajectories, std::uint64_t seed);

/// Aggregated counts across trajectories.
CountsHistogram noisy_execute(const Circuit& circuit, const StateVector& initial,
                              const NoiseModel& noise, std::uint64_t shots,
                              int n_trajectories, std::uint64_t seed);

/// Re-run one recorded trajectory; reproduces its counts bit-exactly.
CountsHistogram replay_trajectory(const Circuit& circuit, const StateVector& initial,
                                  const NoiseModel& noise, std::uint64_t shots_per_traj,
                                  const Trajectory& t);

/// Flip each shot's bits independently per the confusion probabilities.
CountsHistogram apply_readout_confusion(const CountsHistogram& counts,
                                        std::span<const ReadoutConfusion> readout,
                                        std::uint64_t seed);

/// (1 - p) * ideal: the noisy expectation under an exact global depolarizing
/// channel; analytic fixture for the self-mitigation tests.
double global_depolarizing_reference(double p, double ideal_expectation);

}  // namespace quench
