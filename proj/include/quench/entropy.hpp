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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quench/circuit.hpp"
#include "quench/counts.hpp"
#include "quench/mitigation.hpp"
#include "quench/noise.hpp"
#include "quench/rng.hpp"
#include "quench/state_vector.hpp"

namespace quench {

/// Haar-random 2x2 unitary (Ginibre sample, QR, phase fix).
std::array<complex, 4> sample_cue_unitary(Philox& rng);

/// N_U instances of per-site random single-qubit unitaries, reproducible
/// from the seed.
struct RandomUnitaryBatch {
  int n_instances = 0;
  int subsystem_size = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::array<complex, 4>>> unitaries;  // [instance][site]

  static RandomUnitaryBatch sample(int n_instances, int subsystem_size,
                                   std::uint64_t seed);
};

/// Base circuit followed by each instance's single-qubit unitaries on the
/// subsystem; measurement restricted to the subsystem.
std::vector<Circuit> build_rm_circuits(const Circuit& base,
                                       std::span<const int> subsystem,
                                       const RandomUnitaryBatch& batch);

/// X_a = 2^L sum_{j,j'} (-2)^{-D[j,j']} P(j) P(j'), including the diagonal
/// term. The unbiased variant replaces P(j)^2 with
/// count(count-1)/(shots(shots-1)).
double estimate_x_a(const CountsHistogram& counts, int subsystem_size,
                    bool unbiased = false);
double estimate_x_a(std::span<const double> probs, int subsystem_size);

struct PurityEstimate {
  std::vector<double> x_values;
  double mean_x = 0.0;
  double renyi2 = 0.0;
  double std_error = 0.0;  // on renyi2
  bool failed = false;     // mean_x <= 0: no entropy value
  bool flagged = false;    // outside physical purity bounds by > 3 sigma
  std::vector<std::string> notes;
};

struct RenyiOptions {
  int n_instances = 60;
  std::uint64_t shots = 100000;  // 0 selects exact Born probabilities
  std::uint64_t seed = 1;
  bool unbiased = false;
  bool use_qmp = false;  // pack instances pairwise with a spacer qubit
  std::optional<NoiseModel> noise;
  std::optional<MitigationConfig> mitigation;  // TREX/DD/PT/ZNE honored
  int n_trajectories = 10;
  int n_workers = 1;
};

/// Randomized-measurement Renyi-2 estimate of the subsystem after the base
/// circuit: mean of X_a over instances, S2 = -log(mean), standard error
/// propagated through the log.
PurityEstimate estimate_renyi2(const Circuit& base, const StateVector& initial,
                               std::span<const int> subsystem,
                               const RenyiOptions& options);

/// Same protocol on an already-prepared state.
PurityEstimate estimate_renyi2(const StateVector& state,
                               std::span<const int> subsystem,
                               const RenyiOptions& options);

}  // namespace quench
