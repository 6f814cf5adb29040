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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "quench/circuit.hpp"
#include "quench/counts.hpp"
#include "quench/gates.hpp"
#include "quench/rng.hpp"

namespace quench {

/// Dense amplitude vector over 2^n basis states. Qubit 0 is the least
/// significant bit of the basis index; rendered bitstrings put qubit 0
/// rightmost.
struct StateVector {
  int n_qubits = 0;
  std::vector<complex> amplitudes;

  StateVector() = default;
  explicit StateVector(int n);

  static StateVector computational_basis(int n, std::uint64_t basis_index);

  std::uint64_t dim() const { return amplitudes.size(); }
  double norm_sq() const;
  std::vector<double> probabilities() const;
};

void apply_gate_in_place(StateVector& state, const Gate& g);

/// Returns U|psi> with the gate's unitary embedded at its qubits.
StateVector apply_gate(StateVector state, const Gate& g);

/// Applies layers in order. Throws on qubit-count mismatch.
StateVector apply_circuit(StateVector state, const Circuit& circuit);
void apply_circuit_in_place(StateVector& state, const Circuit& circuit);

complex inner_product(const StateVector& a, const StateVector& b);

/// Global-phase-insensitive distance: sqrt(max(0, 2 - 2|<a|b>|)).
double phase_insensitive_distance(const StateVector& a, const StateVector& b);

/// Born probabilities of the listed qubits (ascending significance by list
/// position: qubits[0] is the low bit of the marginal index).
std::vector<double> marginal_probabilities(const StateVector& state,
                                           std::span<const int> qubits);

/// Per-shot outcome sequence from a probability vector: one uniform per shot,
/// inverse-CDF. Deterministic for a fixed generator state.
std::vector<std::uint64_t> sample_outcomes(std::span<const double> probs,
                                           std::uint64_t shots, Philox& rng);

/// Multinomial sample of the marginal Born distribution of measured_qubits.
/// Empty measured_qubits is an error.
CountsHistogram sample_counts(const StateVector& state, std::uint64_t shots,
                              std::uint64_t seed, std::span<const int> measured_qubits);

/// Expectation of a basis-diagonal observable given by per-basis weights.
double diagonal_expectation(const StateVector& state, std::span<const double> weights);

}  // namespace quench
