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

#include "quench/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace quench {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

Gate Gate::unitary1q(int q, const std::array<complex, 4>& u) {
  Gate g{GateKind::Unitary1q, q};
  g.matrix = u;
  if (unitarity_defect_1q(u) > 1e-12) {
    throw std::invalid_argument("custom single-qubit matrix is not unitary");
  }
  return g;
}

Gate Gate::pauli(int q, int axis) {
  switch (axis) {
    case 1: return x(q);
    case 2: return y(q);
    case 3: return z(q);
    default: throw std::invalid_argument("pauli axis must be 1 (X), 2 (Y), or 3 (Z)");
  }
}

std::array<complex, 4> gate_matrix_1q(const Gate& g) {
  const complex i(0.0, 1.0);
  switch (g.kind) {
    case GateKind::H:
      return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    case GateKind::X:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
      return {0.0, -i, i, 0.0};
    case GateKind::Z:
      return {1.0, 0.0, 0.0, -1.0};
    case GateKind::SqrtX:
      return {0.5 * complex(1, 1), 0.5 * complex(1, -1), 0.5 * complex(1, -1),
              0.5 * complex(1, 1)};
    case GateKind::SqrtXDag:
      return {0.5 * complex(1, -1), 0.5 * complex(1, 1), 0.5 * complex(1, 1),
              0.5 * complex(1, -1)};
    case GateKind::Rz:
      return {std::exp(-0.5 * i * g.param), 0.0, 0.0, std::exp(0.5 * i * g.param)};
    case GateKind::Unitary1q:
      return g.matrix;
    case GateKind::Delay:
      return {1.0, 0.0, 0.0, 1.0};
    default:
      throw std::invalid_argument("gate_matrix_1q: " + gate_name(g.kind) +
                                  " is not a single-qubit gate");
  }
}

std::array<complex, 16> gate_matrix_2q(const Gate& g) {
  std::array<complex, 16> m{};
  auto at = [&m](int r, int c) -> complex& { return m[4 * r + c]; };
  switch (g.kind) {
    case GateKind::CX:
      // basis index = 2*b(q1) + b(q0); control q0, target q1
      at(0, 0) = 1;
      at(1, 3) = 1;
      at(2, 2) = 1;
      at(3, 1) = 1;
      return m;
    case GateKind::CZ:
      at(0, 0) = 1;
      at(1, 1) = 1;
      at(2, 2) = 1;
      at(3, 3) = -1;
      return m;
    default:
      throw std::invalid_argument("gate_matrix_2q: " + gate_name(g.kind) +
                                  " is not a two-qubit gate");
  }
}

double unitarity_defect_1q(const std::array<complex, 4>& u) {
  // U U^dagger - I, max abs entry
  double worst = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      complex s = 0.0;
      for (int k = 0; k < 2; ++k) s += u[2 * r + k] * std::conj(u[2 * c + k]);
      if (r == c) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::SqrtX: return "SX";
    case GateKind::SqrtXDag: return "SXDG";
    case GateKind::Rz: return "RZ";
    case GateKind::CX: return "CX";
    case GateKind::CZ: return "CZ";
    case GateKind::Unitary1q: return "U1Q";
    case GateKind::Delay: return "DELAY";
  }
  return "?";
}

}  // namespace quench
