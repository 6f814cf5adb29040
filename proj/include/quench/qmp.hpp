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
#include <utility>
#include <vector>

#include "quench/circuit.hpp"
#include "quench/counts.hpp"
#include "quench/state_vector.hpp"

namespace quench {

/// Bookkeeping for one two-circuit package: merged qubit placement and the
/// positions of each sub-circuit's measured bits within the merged
/// measurement record.
struct PackLayout {
  int width_a = 0;
  int width_b = 0;
  int spacer = 0;  // merged qubit index of the idle spacer
  std::vector<int> measured_bits_a;  // positions in the merged bit record
  std::vector<int> measured_bits_b;
  int merged_width = 0;

  std::string serialize() const;
  static PackLayout parse(const std::string& text);
};

/// Combined circuit on width_a + 1 + width_b qubits: A at [0, Na), one idle
/// spacer, B shifted above it. Layers are zip-merged; the spacer never
/// receives a gate.
std::pair<Circuit, PackLayout> pack(const Circuit& a, const Circuit& b);

/// Marginalize the merged histogram onto each sub-circuit's bits.
std::pair<CountsHistogram, CountsHistogram> split_counts(const CountsHistogram& counts,
                                                         const PackLayout& layout);

/// Sample the packed circuit's measurement record with one seed stream per
/// sub-circuit: group outcomes are drawn from each group's marginal and
/// concatenated shot by shot. Exact for packed circuits, whose state is a
/// tensor product across the spacer by construction; split_counts then
/// recovers bit-identical histograms to standalone runs under the same
/// seeds.
CountsHistogram sample_packed(const StateVector& packed_state, const Circuit& merged,
                              const PackLayout& layout, std::uint64_t shots,
                              std::uint64_t seed_a, std::uint64_t seed_b);

}  // namespace quench
