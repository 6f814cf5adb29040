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
#include <string>
#include <vector>

#include "quench/gates.hpp"

namespace quench {

/// One moment of parallel gates. Gates within a layer act on disjoint qubits.
/// Layers carry an abstract duration; gates inserted by circuit transforms
/// (twirl frames, pre-measurement flips, echo pulses) live in zero-duration
/// layers so the idle schedule of the original circuit is preserved.
struct Layer {
  std::vector<Gate> gates;
  double duration = 1.0;
};

/// A brick-wall layer of two-qubit blocks, kept as construction metadata so
/// a circuit's logical structure survives the expansion into gate moments.
struct BlockLayerInfo {
  std::vector<std::pair<int, int>> bonds;
  double theta_x = 0.0;
  double theta_y = 0.0;
  double theta_z = 0.0;
};

/// An idle window that a transform chose not to touch.
struct SkippedWindow {
  int qubit = 0;
  int first_layer = 0;
  int last_layer = 0;
  double duration = 0.0;
};

struct CircuitMeta {
  std::string provenance;                  // who built it and how
  int trotter_steps = 0;
  bool odd_step_test = false;              // test circuit without exact echo
  std::vector<BlockLayerInfo> block_layers;
  std::vector<SkippedWindow> skipped_windows;
  std::vector<std::string> notes;
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Layer> layers;
  std::vector<int> measured;  // empty means all qubits, ascending
  CircuitMeta meta;

  int depth() const { return static_cast<int>(layers.size()); }
  std::size_t gate_count() const;
  std::size_t cx_count() const;  // CX and CZ
  double total_duration() const;

  /// Measured qubit list with the empty-means-all default resolved.
  std::vector<int> measured_qubits() const;

  /// Throws if a layer reuses a qubit or any index is out of range.
  void validate() const;

  Layer& append_layer(double duration = 1.0);
};

/// Layer-reversed, gate-inverted adjoint (parameterized gates negated).
Circuit adjoint(const Circuit& c);

}  // namespace quench
