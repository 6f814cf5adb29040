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

#include "quench/channel_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace quench {

namespace {

std::array<complex, 4> conj_matrix(const std::array<complex, 4>& m) {
  return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])};
}

}  // namespace

ChannelSimulator::ChannelSimulator(const StateVector& initial) : n_(initial.n_qubits) {
  if (n_ > 7)
    throw std::invalid_argument("channel oracle supports at most 7 qubits");
  vec_ = StateVector(2 * n_);
  const std::uint64_t dim = initial.dim();
  for (std::uint64_t r = 0; r < dim; ++r) {
    if (initial.amplitudes[r] == complex{0.0, 0.0}) continue;
    for (std::uint64_t c = 0; c < dim; ++c) {
      vec_.amplitudes[(r << n_) | c] =
          initial.amplitudes[r] * std::conj(initial.amplitudes[c]);
    }
  }
}

void ChannelSimulator::apply_unitary(const Gate& g) {
  // U rho U^dagger == (U on row bits) followed by (conj U on column bits)
  Gate row = g;
  row.q0 = g.q0 + n_;
  if (g.two_qubit()) row.q1 = g.q1 + n_;
  apply_gate_in_place(vec_, row);

  Gate col = g;
  switch (g.kind) {
    case GateKind::Rz:
      col.param = -g.param;
      break;
    case GateKind::SqrtX:
      col.kind = GateKind::SqrtXDag;
      break;
    case GateKind::SqrtXDag:
      col.kind = GateKind::SqrtX;
      break;
    case GateKind::Y:
      // conj(Y) = -Y, and the sign is physical here: use the explicit matrix
      col.kind = GateKind::Unitary1q;
      col.matrix = {complex(0, 0), complex(0, 1), complex(0, -1), complex(0, 0)};
      break;
    case GateKind::Unitary1q:
      col.matrix = conj_matrix(g.matrix);
      break;
    default:
      break;  // real matrices
  }
  apply_gate_in_place(vec_, col);
}

void ChannelSimulator::apply_two_qubit_depol(int a, int b, double p) {
  if (p == 0.0) return;
  const std::vector<complex> original = vec_.amplitudes;
  std::vector<complex> acc(vec_.amplitudes.size(), complex{0.0, 0.0});
  for (int k = 1; k < 16; ++k) {
    vec_.amplitudes = original;
    const int pa = k & 3;
    const int pb = k >> 2;
    if (pa) apply_unitary(Gate::pauli(a, pa));
    if (pb) apply_unitary(Gate::pauli(b, pb));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += vec_.amplitudes[i];
  }
  const double w = p / 15.0;
  for (std::size_t i = 0; i < acc.size(); ++i)
    vec_.amplitudes[i] = (1.0 - p) * original[i] + w * acc[i];
}

void ChannelSimulator::apply_twirled_zz(int a, int b, double eps) {
  if (eps == 0.0) return;
  const double c2 = std::cos(0.5 * eps) * std::cos(0.5 * eps);
  const double s2 = 1.0 - c2;
  const std::vector<complex> original = vec_.amplitudes;
  apply_unitary(Gate::z(a));
  apply_unitary(Gate::z(b));
  for (std::size_t i = 0; i < vec_.amplitudes.size(); ++i)
    vec_.amplitudes[i] = c2 * original[i] + s2 * vec_.amplitudes[i];
}

void ChannelSimulator::apply_coherent_zz(int a, int b, double eps) {
  // Rzz(eps) conjugation: element (r,c) picks up exp(-i eps (zr - zc)/2)
  if (eps == 0.0) return;
  const std::uint64_t dim = vec_.dim();
  const std::uint64_t ra = std::uint64_t{1} << (a + n_);
  const std::uint64_t rb = std::uint64_t{1} << (b + n_);
  const std::uint64_t ca = std::uint64_t{1} << a;
  const std::uint64_t cb = std::uint64_t{1} << b;
  const complex minus = std::exp(complex(0.0, -eps));
  const complex plus = std::exp(complex(0.0, eps));
  for (std::uint64_t i = 0; i < dim; ++i) {
    const int zr = (((i & ra) != 0) == ((i & rb) != 0)) ? 1 : -1;
    const int zc = (((i & ca) != 0) == ((i & cb) != 0)) ? 1 : -1;
    if (zr == zc) continue;
    vec_.amplitudes[i] *= (zr < zc) ? plus : minus;
  }
}

void ChannelSimulator::run_circuit(const Circuit& circuit, const NoiseModel& noise,
                                   bool pauli_twirl_limit) {
  if (circuit.n_qubits != n_) throw std::invalid_argument("qubit count mismatch");
  std::vector<char> busy(n_);
  for (const auto& layer : circuit.layers) {
    std::fill(busy.begin(), busy.end(), 0);
    for (const auto& g : layer.gates) {
      busy[g.q0] = 1;
      if (g.two_qubit()) busy[g.q1] = 1;
      if (g.kind == GateKind::Delay) {
        if (noise.idle_z_rate != 0.0 && g.param != 0.0)
          apply_unitary(Gate::rz(g.q0, noise.idle_z_rate * g.param));
        continue;
      }
      apply_unitary(g);
      if (!g.two_qubit()) continue;
      if (noise.two_qubit_depol > 0.0)
        apply_two_qubit_depol(g.q0, g.q1, noise.two_qubit_depol);
      if (noise.two_qubit_coherent != 0.0) {
        if (pauli_twirl_limit)
          apply_twirled_zz(g.q0, g.q1, noise.two_qubit_coherent);
        else
          apply_coherent_zz(g.q0, g.q1, noise.two_qubit_coherent);
      }
    }
    if (noise.idle_z_rate != 0.0 && layer.duration != 0.0) {
      for (int q = 0; q < n_; ++q)
        if (!busy[q]) apply_unitary(Gate::rz(q, noise.idle_z_rate * layer.duration));
    }
  }
}

std::vector<double> ChannelSimulator::probabilities() const {
  std::vector<double> p(std::uint64_t{1} << n_);
  for (std::uint64_t r = 0; r < p.size(); ++r)
    p[r] = vec_.amplitudes[(r << n_) | r].real();
  return p;
}

std::vector<double> confuse_probabilities(std::vector<double> probs,
                                          std::span<const ReadoutConfusion> readout) {
  const std::size_t dim = probs.size();
  int width = 0;
  while ((std::size_t{1} << width) < dim) ++width;
  if (static_cast<int>(readout.size()) < width)
    throw std::invalid_argument("confusion list narrower than probability vector");
  for (int q = 0; q < width; ++q) {
    const double p01 = readout[q].p01;
    const double p10 = readout[q].p10;
    if (p01 == 0.0 && p10 == 0.0) continue;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & bit) continue;
      const double v0 = probs[i];
      const double v1 = probs[i | bit];
      probs[i] = (1.0 - p01) * v0 + p10 * v1;
      probs[i | bit] = p01 * v0 + (1.0 - p10) * v1;
    }
  }
  return probs;
}

double channel_expectation(const Circuit& circuit, const StateVector& initial,
                           const NoiseModel& noise, bool pauli_twirl_limit,
                           bool trex_limit, std::span<const double> weights) {
  ChannelSimulator sim(initial);
  sim.run_circuit(circuit, noise, pauli_twirl_limit);
  auto probs = sim.probabilities();
  if (noise.has_readout_error()) {
    std::vector<ReadoutConfusion> eff(noise.readout.begin(), noise.readout.end());
    if (trex_limit) {
      for (auto& r : eff) {
        const double q = 0.5 * (r.p01 + r.p10);
        r = ReadoutConfusion{q, q};
      }
    }
    probs = confuse_probabilities(std::move(probs), eff);
  }
  if (probs.size() != weights.size())
    throw std::invalid_argument("weight vector size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) acc += probs[i] * weights[i];
  return acc;
}

}  // namespace quench
