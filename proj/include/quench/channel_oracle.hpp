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

#include <span>
#include <vector>

#include "quench/circuit.hpp"
#include "quench/noise.hpp"
#include "quench/state_vector.hpp"

namespace quench {

/// Exact density-matrix evolution of a noisy circuit, used as the reference
/// the Monte Carlo trajectory engine is tested against. The density matrix is
/// stored vectorized as a 2n-qubit state, so the statevector kernels drive
/// both sides of the conjugation. Practical up to ~7 qubits.
class ChannelSimulator {
 public:
  explicit ChannelSimulator(const StateVector& initial);

  int n_qubits() const { return n_; }

  void apply_unitary(const Gate& g);

  /// Uniform two-qubit depolarizing via the explicit 15-term Pauli sum.
  void apply_two_qubit_depol(int a, int b, double p);

  /// Pauli-twirled residual ZZ rotation: cos^2(eps/2) I + sin^2(eps/2) ZZ.
  void apply_twirled_zz(int a, int b, double eps);

  void apply_coherent_zz(int a, int b, double eps);

  /// Walks the circuit with the noise model attached to every CX/CZ and idle
  /// window, matching the trajectory engine's schedule. With
  /// pauli_twirl_limit the coherent ZZ is replaced by its twirled channel
  /// (the infinite-copy limit of random twirling).
  void run_circuit(const Circuit& circuit, const NoiseModel& noise,
                   bool pauli_twirl_limit = false);

  /// Diagonal of rho in the computational basis.
  std::vector<double> probabilities() const;

 private:
  int n_;
  StateVector vec_;  // |rho>> over 2n qubits; row bits high, column bits low
};

/// Per-bit readout confusion applied to a probability vector (bit k of the
/// index uses readout[k]).
std::vector<double> confuse_probabilities(std::vector<double> probs,
                                          std::span<const ReadoutConfusion> readout);

/// Exact noisy expectation of a basis-diagonal observable: channel evolution,
/// then readout confusion (symmetrized per qubit when trex_limit, the
/// infinite-sample limit of readout bit-flip twirling).
double channel_expectation(const Circuit& circuit, const StateVector& initial,
                           const NoiseModel& noise, bool pauli_twirl_limit,
                           bool trex_limit, std::span<const double> weights);

}  // namespace quench
