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

#include "quench/state_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quench {

StateVector::StateVector(int n) : n_qubits(n) {
  if (n < 0 || n > 30) throw std::invalid_argument("qubit count out of range");
  amplitudes.assign(std::uint64_t{1} << n, complex{0.0, 0.0});
}

StateVector StateVector::computational_basis(int n, std::uint64_t basis_index) {
  StateVector s(n);
  if (basis_index >= s.dim()) throw std::out_of_range("basis index out of range");
  s.amplitudes[basis_index] = 1.0;
  return s;
}

double StateVector::norm_sq() const {
  double t = 0.0;
  for (const auto& a : amplitudes) t += std::norm(a);
  return t;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) p[i] = std::norm(amplitudes[i]);
  return p;
}

namespace {

void check_qubit(const StateVector& s, int q) {
  if (q < 0 || q >= s.n_qubits)
    throw std::out_of_range("gate qubit index " + std::to_string(q) +
                            " out of range for " + std::to_string(s.n_qubits) +
                            " qubits");
}

void apply_matrix_1q(StateVector& s, int q, const std::array<complex, 4>& u) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  const std::uint64_t lo_mask = bit - 1;
  const std::uint64_t hi_mask = ~lo_mask;
  complex* a = s.amplitudes.data();
  const std::uint64_t half = s.dim() >> 1;
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
    const std::uint64_t i1 = i0 | bit;
    const complex v0 = a[i0];
    const complex v1 = a[i1];
    a[i0] = u[0] * v0 + u[1] * v1;
    a[i1] = u[2] * v0 + u[3] * v1;
  }
}

void apply_diag_1q(StateVector& s, int q, complex d0, complex d1) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  complex* a = s.amplitudes.data();
  const std::uint64_t dim = s.dim();
  for (std::uint64_t i = 0; i < dim; ++i) a[i] *= ((i & bit) ? d1 : d0);
}

void apply_x(StateVector& s, int q) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  const std::uint64_t lo_mask = bit - 1;
  const std::uint64_t hi_mask = ~lo_mask;
  complex* a = s.amplitudes.data();
  const std::uint64_t half = s.dim() >> 1;
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
    std::swap(a[i0], a[i0 | bit]);
  }
}

void apply_cx(StateVector& s, int control, int target) {
  const std::uint64_t cbit = std::uint64_t{1} << control;
  const std::uint64_t tbit = std::uint64_t{1} << target;
  complex* a = s.amplitudes.data();
  const std::uint64_t dim = s.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(a[i], a[i | tbit]);
  }
}

void apply_cz(StateVector& s, int qa, int qb) {
  const std::uint64_t abit = std::uint64_t{1} << qa;
  const std::uint64_t bbit = std::uint64_t{1} << qb;
  complex* a = s.amplitudes.data();
  const std::uint64_t dim = s.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & abit) && (i & bbit)) a[i] = -a[i];
  }
}

}  // namespace

void apply_gate_in_place(StateVector& state, const Gate& g) {
  check_qubit(state, g.q0);
  if (g.two_qubit()) {
    check_qubit(state, g.q1);
    if (g.q0 == g.q1) throw std::invalid_argument("two-qubit gate with identical qubits");
  }
  const complex i(0.0, 1.0);
  switch (g.kind) {
    case GateKind::X:
      apply_x(state, g.q0);
      return;
    case GateKind::Z:
      apply_diag_1q(state, g.q0, 1.0, -1.0);
      return;
    case GateKind::Rz:
      apply_diag_1q(state, g.q0, std::exp(-0.5 * i * g.param), std::exp(0.5 * i * g.param));
      return;
    case GateKind::CX:
      apply_cx(state, g.q0, g.q1);
      return;
    case GateKind::CZ:
      apply_cz(state, g.q0, g.q1);
      return;
    case GateKind::Delay:
      return;  // identity; duration matters only to noise models
    default:
      apply_matrix_1q(state, g.q0, gate_matrix_1q(g));
      return;
  }
}

StateVector apply_gate(StateVector state, const Gate& g) {
  apply_gate_in_place(state, g);
  return state;
}

void apply_circuit_in_place(StateVector& state, const Circuit& circuit) {
  if (circuit.n_qubits != state.n_qubits)
    throw std::invalid_argument("circuit acts on " + std::to_string(circuit.n_qubits) +
                                " qubits but state has " + std::to_string(state.n_qubits));
  for (const auto& layer : circuit.layers)
    for (const auto& g : layer.gates) apply_gate_in_place(state, g);
}

StateVector apply_circuit(StateVector state, const Circuit& circuit) {
  apply_circuit_in_place(state, circuit);
  return state;
}

complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits != b.n_qubits) throw std::invalid_argument("state size mismatch");
  complex t = 0.0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
    t += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return t;
}

double phase_insensitive_distance(const StateVector& a, const StateVector& b) {
  const double ov = std::abs(inner_product(a, b));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * ov));
}

std::vector<double> marginal_probabilities(const StateVector& state,
                                           std::span<const int> qubits) {
  if (qubits.empty()) throw std::invalid_argument("empty qubit list");
  for (int q : qubits) check_qubit(state, q);
  std::vector<double> out(std::uint64_t{1} << qubits.size(), 0.0);
  const std::uint64_t dim = state.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k)
      key |= ((i >> qubits[k]) & 1u) << k;
    out[key] += std::norm(state.amplitudes[i]);
  }
  return out;
}

std::vector<std::uint64_t> sample_outcomes(std::span<const double> probs,
                                           std::uint64_t shots, Philox& rng) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  const double total = acc;
  std::vector<std::uint64_t> out;
  out.reserve(shots);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out.push_back(std::min<std::uint64_t>(it - cdf.begin(), probs.size() - 1));
  }
  return out;
}

CountsHistogram sample_counts(const StateVector& state, std::uint64_t shots,
                              std::uint64_t seed, std::span<const int> measured_qubits) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (measured_qubits.empty()) throw std::invalid_argument("empty measured qubit list");
  const auto probs = marginal_probabilities(state, measured_qubits);
  Philox rng(seed);
  CountsHistogram h;
  h.width = static_cast<int>(measured_qubits.size());
  for (std::uint64_t outcome : sample_outcomes(probs, shots, rng)) h.add(outcome);
  return h;
}

double diagonal_expectation(const StateVector& state, std::span<const double> weights) {
  if (weights.size() != state.dim()) throw std::invalid_argument("weight vector size mismatch");
  double t = 0.0;
  for (std::uint64_t i = 0; i < state.dim(); ++i)
    t += std::norm(state.amplitudes[i]) * weights[i];
  return t;
}

}  // namespace quench
