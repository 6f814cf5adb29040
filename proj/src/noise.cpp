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

#include "quench/noise.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "quench/rng.hpp"

namespace quench {

bool NoiseModel::has_readout_error() const {
  for (const auto& r : readout)
    if (r.p01 != 0.0 || r.p10 != 0.0) return true;
  return false;
}

bool NoiseModel::is_noiseless() const {
  return two_qubit_depol == 0.0 && two_qubit_coherent == 0.0 &&
         idle_z_rate == 0.0 && !has_readout_error();
}

void NoiseModel::validate() const {
  if (two_qubit_depol < 0.0 || two_qubit_depol > 1.0)
    throw std::invalid_argument("two-qubit depolarizing probability out of [0,1]");
  for (const auto& r : readout) {
    if (r.p01 < 0.0 || r.p01 > 1.0 || r.p10 < 0.0 || r.p10 > 1.0)
      throw std::invalid_argument("readout confusion probability out of [0,1]");
  }
}

NoiseModel NoiseModel::plausible_defaults(int n_qubits) {
  NoiseModel m;
  m.two_qubit_depol = 0.005;
  m.two_qubit_coherent = 0.03;
  m.idle_z_rate = 0.005;
  m.readout.assign(n_qubits, ReadoutConfusion{0.02, 0.05});
  return m;
}

NoiseModel NoiseModel::uniform_readout(int n_qubits, double p01, double p10) {
  NoiseModel m;
  m.readout.assign(n_qubits, ReadoutConfusion{p01, p10});
  return m;
}

std::string NoiseModel::serialize() const {
  std::ostringstream os;
  os.precision(12);
  os << "p2=" << two_qubit_depol << '\n';
  os << "eps2=" << two_qubit_coherent << '\n';
  os << "idle_z=" << idle_z_rate << '\n';
  for (std::size_t q = 0; q < readout.size(); ++q) {
    const auto& r = readout[q];
    // column-major 2x2: P(0|0), P(1|0), P(0|1), P(1|1)
    os << "readout.q" << q << '=' << (1.0 - r.p01) << ',' << r.p01 << ','
       << r.p10 << ',' << (1.0 - r.p10) << '\n';
  }
  return os.str();
}

NoiseModel NoiseModel::parse(std::istream& is) {
  NoiseModel m;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("noise model line missing '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "p2")
      m.two_qubit_depol = std::stod(val);
    else if (key == "eps2")
      m.two_qubit_coherent = std::stod(val);
    else if (key == "idle_z")
      m.idle_z_rate = std::stod(val);
    else if (key.rfind("readout.q", 0) == 0) {
      const int q = std::stoi(key.substr(9));
      double c[4];
      std::istringstream vs(val);
      std::string tok;
      for (int i = 0; i < 4; ++i) {
        if (!std::getline(vs, tok, ','))
          throw std::runtime_error("readout entry needs 4 values: " + line);
        c[i] = std::stod(tok);
      }
      if (std::abs(c[0] + c[1] - 1.0) > 1e-9 || std::abs(c[2] + c[3] - 1.0) > 1e-9)
        throw std::runtime_error("confusion matrix columns must sum to 1: " + line);
      if (q >= static_cast<int>(m.readout.size())) m.readout.resize(q + 1);
      m.readout[q] = ReadoutConfusion{c[1], c[2]};
    } else {
      throw std::runtime_error("unknown noise model key: " + key);
    }
  }
  m.validate();
  return m;
}

namespace {

/// Applies one trajectory's gates with noise; fills the insertion record, or
/// verifies against an expected record when replaying.
StateVector run_trajectory_state(const Circuit& circuit, const StateVector& initial,
                                 const NoiseModel& noise, Philox& rng,
                                 Trajectory& record) {
  StateVector state = initial;
  const bool coherent = noise.two_qubit_coherent != 0.0;
  const double eps_half = 0.5 * noise.two_qubit_coherent;
  const complex phase_plus = std::exp(complex(0.0, -eps_half));
  const complex phase_minus = std::exp(complex(0.0, eps_half));
  std::vector<char> busy(circuit.n_qubits);

  for (int li = 0; li < static_cast<int>(circuit.layers.size()); ++li) {
    const Layer& layer = circuit.layers[li];
    std::fill(busy.begin(), busy.end(), 0);
    for (int gi = 0; gi < static_cast<int>(layer.gates.size()); ++gi) {
      const Gate& g = layer.gates[gi];
      busy[g.q0] = 1;
      if (g.two_qubit()) busy[g.q1] = 1;

      if (g.kind == GateKind::Delay) {
        if (noise.idle_z_rate != 0.0 && g.param != 0.0)
          apply_gate_in_place(state, Gate::rz(g.q0, noise.idle_z_rate * g.param));
        continue;
      }
      apply_gate_in_place(state, g);
      if (!g.two_qubit()) continue;

      if (noise.two_qubit_depol > 0.0 && rng.next_double() < noise.two_qubit_depol) {
        const int pauli = 1 + static_cast<int>(rng.next_below(15));
        record.inserted_errors.push_back({li, gi, pauli});
        if (pauli & 3) apply_gate_in_place(state, Gate::pauli(g.q0, pauli & 3));
        if (pauli >> 2) apply_gate_in_place(state, Gate::pauli(g.q1, pauli >> 2));
      }
      if (coherent) {
        // Rzz(eps2): phase e^{-i eps/2} on aligned pairs, e^{+i eps/2} otherwise
        const std::uint64_t b0 = std::uint64_t{1} << g.q0;
        const std::uint64_t b1 = std::uint64_t{1} << g.q1;
        for (std::uint64_t i = 0; i < state.dim(); ++i) {
          const bool equal = ((i & b0) != 0) == ((i & b1) != 0);
          state.amplitudes[i] *= equal ? phase_plus : phase_minus;
        }
      }
    }
    if (noise.idle_z_rate != 0.0 && layer.duration != 0.0) {
      for (int q = 0; q < circuit.n_qubits; ++q)
        if (!busy[q])
          apply_gate_in_place(state, Gate::rz(q, noise.idle_z_rate * layer.duration));
    }
  }
  return state;
}

CountsHistogram measure_with_readout(const StateVector& state, const Circuit& circuit,
                                     const NoiseModel& noise, std::uint64_t shots,
                                     Philox& rng) {
  const auto measured = circuit.measured_qubits();
  const auto probs = marginal_probabilities(state, measured);
  const auto outcomes = sample_outcomes(probs, shots, rng);

  const bool flips = noise.has_readout_error();
  CountsHistogram h;
  h.width = static_cast<int>(measured.size());
  for (std::uint64_t bits : outcomes) {
    if (flips) {
      for (std::size_t k = 0; k < measured.size(); ++k) {
        const int q = measured[k];
        if (q >= static_cast<int>(noise.readout.size())) continue;
        const auto& r = noise.readout[q];
        const bool b = (bits >> k) & 1u;
        const double p_flip = b ? r.p10 : r.p01;
        if (p_flip > 0.0 && rng.next_double() < p_flip) bits ^= (std::uint64_t{1} << k);
      }
    }
    h.add(bits);
  }
  return h;
}

}  // namespace

std::vector<TrajectoryResult> noisy_execute_trajectories(
    const Circuit& circuit, const StateVector& initial, const NoiseModel& noise,
    std::uint64_t shots, int n_trajectories, std::uint64_t seed) {
  noise.validate();
  if (n_trajectories < 1) throw std::invalid_argument("need at least one trajectory");
  if (shots % n_trajectories != 0)
    throw std::invalid_argument("shots must be divisible by n_trajectories");
  const std::uint64_t shots_per = shots / n_trajectories;

  std::vector<TrajectoryResult> results;
  results.reserve(n_trajectories);
  for (int t = 0; t < n_trajectories; ++t) {
    Philox rng(seed, static_cast<std::uint64_t>(t));
    TrajectoryResult r;
    r.trajectory.seed = seed;
    r.trajectory.stream = t;
    const StateVector final_state =
        run_trajectory_state(circuit, initial, noise, rng, r.trajectory);
    r.counts = measure_with_readout(final_state, circuit, noise, shots_per, rng);
    results.push_back(std::move(r));
  }
  return results;
}

CountsHistogram noisy_execute(const Circuit& circuit, const StateVector& initial,
                              const NoiseModel& noise, std::uint64_t shots,
                              int n_trajectories, std::uint64_t seed) {
  const auto results = noisy_execute_trajectories(circuit, initial, noise, shots,
                                                  n_trajectories, seed);
  CountsHistogram total;
  total.width = static_cast<int>(circuit.measured_qubits().size());
  for (const auto& r : results)
    for (const auto& [bits, n] : r.counts.counts) total.add(bits, n);
  return total;
}

CountsHistogram replay_trajectory(const Circuit& circuit, const StateVector& initial,
                                  const NoiseModel& noise, std::uint64_t shots_per_traj,
                                  const Trajectory& t) {
  Philox rng(t.seed, t.stream);
  Trajectory regenerated;
  const StateVector final_state =
      run_trajectory_state(circuit, initial, noise, rng, regenerated);
  if (regenerated.inserted_errors.size() != t.inserted_errors.size())
    throw std::runtime_error("trajectory replay diverged from the record");
  for (std::size_t i = 0; i < t.inserted_errors.size(); ++i) {
    const auto& a = regenerated.inserted_errors[i];
    const auto& b = t.inserted_errors[i];
    if (a.layer != b.layer || a.gate != b.gate || a.pauli != b.pauli)
      throw std::runtime_error("trajectory replay diverged from the record");
  }
  return measure_with_readout(final_state, circuit, noise, shots_per_traj, rng);
}

CountsHistogram apply_readout_confusion(const CountsHistogram& counts,
                                        std::span<const ReadoutConfusion> readout,
                                        std::uint64_t seed) {
  if (static_cast<int>(readout.size()) != counts.width)
    throw std::invalid_argument("confusion model width does not match counts");
  Philox rng(seed);
  CountsHistogram out;
  out.width = counts.width;
  for (const auto& [bits, n] : counts.counts) {
    for (std::uint64_t s = 0; s < n; ++s) {
      std::uint64_t b = bits;
      for (int k = 0; k < counts.width; ++k) {
        const bool set = (b >> k) & 1u;
        const double p_flip = set ? readout[k].p10 : readout[k].p01;
        if (p_flip > 0.0 && rng.next_double() < p_flip) b ^= (std::uint64_t{1} << k);
      }
      out.add(b);
    }
  }
  return out;
}

double global_depolarizing_reference(double p, double ideal_expectation) {
  if (p < 0.0 || p >= 1.0) throw std::invalid_argument("noise factor must be in [0,1)");
  return (1.0 - p) * ideal_expectation;
}

}  // namespace quench
