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

#include <Eigen/Dense>
#include <span>

#include "quench/state_vector.hpp"

namespace quench {

struct DensityMatrix {
  Eigen::MatrixXcd entries;

  int dim() const { return static_cast<int>(entries.rows()); }

  /// Worst violation among Hermiticity, unit trace, and spectrum >= 0.
  double invariant_defect() const;
};

DensityMatrix density_from_state(const StateVector& state);

/// Partial trace over the complement of `subsystem`. The subsystem list must
/// be nonempty with distinct, valid indices; listing all qubits is allowed.
/// Bit k of the reduced index is subsystem[k].
DensityMatrix reduced_density_matrix(const StateVector& state,
                                     std::span<const int> subsystem);

/// Tr(rho^2).
double exact_purity(const DensityMatrix& rho);

/// Renyi-2 entropy of the subsystem, -log Tr(rho_A^2), from the exact state.
double exact_renyi2(const StateVector& state, std::span<const int> subsystem);

}  // namespace quench
