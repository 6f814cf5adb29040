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

#include "quench/circuit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace quench {

std::size_t Circuit::gate_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.gates.size();
  return n;
}

std::size_t Circuit::cx_count() const {
  std::size_t n = 0;
  for (const auto& l : layers)
    for (const auto& g : l.gates)
      if (g.two_qubit()) ++n;
  return n;
}

double Circuit::total_duration() const {
  double t = 0.0;
  for (const auto& l : layers) t += l.duration;
  return t;
}

std::vector<int> Circuit::measured_qubits() const {
  if (!measured.empty()) return measured;
  std::vector<int> all(n_qubits);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

void Circuit::validate() const {
  std::vector<char> seen(n_qubits);
  for (std::size_t li = 0; li < layers.size(); ++li) {
    std::fill(seen.begin(), seen.end(), 0);
    for (const auto& g : layers[li].gates) {
      const int qs[2] = {g.q0, g.q1};
      const int nq = g.two_qubit() ? 2 : 1;
      for (int k = 0; k < nq; ++k) {
        const int q = qs[k];
        if (q < 0 || q >= n_qubits)
          throw std::out_of_range("circuit layer " + std::to_string(li) +
                                  ": qubit index " + std::to_string(q) +
                                  " out of range");
        if (seen[q])
          throw std::invalid_argument("circuit layer " + std::to_string(li) +
                                      ": qubit " + std::to_string(q) +
                                      " used twice");
        seen[q] = 1;
      }
      if (g.two_qubit() && g.q0 == g.q1)
        throw std::invalid_argument("two-qubit gate with identical qubits");
    }
  }
  for (int q : measured)
    if (q < 0 || q >= n_qubits)
      throw std::out_of_range("measured qubit out of range");
}

Layer& Circuit::append_layer(double duration) {
  layers.push_back(Layer{{}, duration});
  return layers.back();
}

Circuit adjoint(const Circuit& c) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  out.measured = c.measured;
  out.meta.provenance = c.meta.provenance.empty() ? "adjoint" : c.meta.provenance + "-adjoint";
  for (auto it = c.layers.rbegin(); it != c.layers.rend(); ++it) {
    Layer l;
    l.duration = it->duration;
    for (const auto& g : it->gates) {
      Gate inv = g;
      switch (g.kind) {
        case GateKind::Rz:
          inv.param = -g.param;
          break;
        case GateKind::SqrtX:
          inv.kind = GateKind::SqrtXDag;
          break;
        case GateKind::SqrtXDag:
          inv.kind = GateKind::SqrtX;
          break;
        case GateKind::Unitary1q: {
          // conjugate transpose
          inv.matrix = {std::conj(g.matrix[0]), std::conj(g.matrix[2]),
                        std::conj(g.matrix[1]), std::conj(g.matrix[3])};
          break;
        }
        default:
          break;  // H, Paulis, CX, CZ, Delay are self-inverse
      }
      l.gates.push_back(inv);
    }
    out.layers.push_back(std::move(l));
  }
  return out;
}

}  // namespace quench
