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
#include <complex>
#include <cstdint>
#include <string>

namespace quench {

using complex = std::complex<double>;

enum class GateKind : std::uint8_t {
  H,
  X,
  Y,
  Z,
  SqrtX,
  SqrtXDag,
  Rz,
  CX,
  CZ,
  Unitary1q,  // arbitrary single-qubit matrix (validated unitary)
  Delay,      // occupies a qubit for an explicit idle duration
};

/// A gate application. q1 is used by two-qubit kinds only (CX control is q0,
/// target is q1). `param` is the Rz angle or the Delay duration.
struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;
  double param = 0.0;
  std::array<complex, 4> matrix{};  // Unitary1q payload, row-major

  bool two_qubit() const { return kind == GateKind::CX || kind == GateKind::CZ; }

  static Gate h(int q) { return {GateKind::H, q}; }
  static Gate x(int q) { return {GateKind::X, q}; }
  static Gate y(int q) { return {GateKind::Y, q}; }
  static Gate z(int q) { return {GateKind::Z, q}; }
  static Gate sqrt_x(int q) { return {GateKind::SqrtX, q}; }
  static Gate sqrt_x_dag(int q) { return {GateKind::SqrtXDag, q}; }
  static Gate rz(int q, double theta) { return {GateKind::Rz, q, -1, theta}; }
  static Gate cx(int control, int target) { return {GateKind::CX, control, target}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, a, b}; }
  static Gate delay(int q, double duration) { return {GateKind::Delay, q, -1, duration}; }
  static Gate unitary1q(int q, const std::array<complex, 4>& u);

  /// Pauli by code 0..3 = I,X,Y,Z (code 0 is rejected; there is no identity gate).
  static Gate pauli(int q, int axis);
};

/// Row-major 2x2 matrix of a single-qubit gate. Throws for two-qubit kinds.
/// Delay is the identity (its duration only matters to noise models).
std::array<complex, 4> gate_matrix_1q(const Gate& g);

/// Row-major 4x4 matrix of a two-qubit gate in the basis |q1 q0> with the
/// gate's q0 as the low bit.
std::array<complex, 16> gate_matrix_2q(const Gate& g);

/// Max-norm deviation of U U^dagger from the identity.
double unitarity_defect_1q(const std::array<complex, 4>& u);

std::string gate_name(GateKind kind);

}  // namespace quench
