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

#include <string>
#include <vector>

#include "quench/circuit.hpp"
#include "quench/state_vector.hpp"

namespace quench {

enum class Boundary { OBC, PBC };
enum class TrotterOrder { First, SecondOptimized };

/// XXZ chain H = (J1/4) sum_j (XX + YY + Delta ZZ)_{j,j+1}, with a wrap bond
/// for PBC. Times are in units of 1/J1 with hbar = 1.
struct XXZParams {
  int n_sites = 2;          // N
  double coupling = 1.0;    // J1 > 0
  double anisotropy = 1.0;  // Delta
  double step_size = 0.5;   // dt > 0
  int n_steps = 1;          // M >= 1
  Boundary boundary = Boundary::OBC;

  double theta_x() const { return 0.5 * coupling * step_size; }
  double theta_y() const { return 0.5 * coupling * step_size; }
  double theta_z() const { return 0.5 * coupling * anisotropy * step_size; }

  void validate() const;
};

std::string boundary_name(Boundary b);

/// |up down up down ...> with site 1 (qubit 0) spin-up. Spin-up is bit 0.
StateVector neel_state(int n);

/// Two-qubit circuit implementing exp(-i/2 (tx XX + ty YY + tz ZZ)) on qubits
/// (0, 1) with three CX gates across seven depth positions, up to a global
/// phase.
Circuit unit_block(double tx, double ty, double tz);

/// Brick-wall Trotter circuit. Even bonds (0,1),(2,3),... form the half-angle
/// boundary layers of the optimized second-order form; odd bonds
/// (1,2),(3,4),... plus the PBC wrap bond (N-1,0) form the interior layers.
Circuit build_trotter_circuit(const XXZParams& params, TrotterOrder order);

/// Forward/backward test circuit: first ceil(M/2) steps at +dt, the rest at
/// -dt, composed in the optimized layout. For even M the only parameter-free
/// layer is the central one and the ideal action is the identity; odd M is
/// flagged in metadata. Null-parameter blocks are kept as physical gates.
Circuit build_sm_test_circuit(const XXZParams& params);

/// e^{-iHt}|initial> via a matrix-free Lanczos propagator with residual
/// control. Requires N <= 14.
StateVector exact_evolve(const XXZParams& params, const StateVector& initial, double t);

/// y = H x for the XXZ Hamiltonian (matrix-free).
void xxz_apply(const XXZParams& params, std::span<const complex> x, std::span<complex> y);

/// Total Sz expectation, sum_i <sigma^z_i>/2 (conserved by the dynamics).
double total_z_magnetization(const StateVector& state);

/// Plain-text block-layer listing: one layer per line,
/// `L<k>: U(<a>,<b>;tx,ty,tz) ...`. Requires block metadata.
std::string export_block_layers(const Circuit& circuit);

}  // namespace quench
