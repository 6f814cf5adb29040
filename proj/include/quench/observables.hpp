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

#include "quench/counts.hpp"
#include "quench/state_vector.hpp"

namespace quench {

enum class ObservableKind { StaggeredMagnetization };

struct ObservableSpec {
  ObservableKind kind = ObservableKind::StaggeredMagnetization;
  int n_sites = 0;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// (1/N) sum_{i=1..N} (-1)^i <S^z_i>, sites numbered from 1, spin-up = bit 0.
/// Per-shot weight of a measured bitstring; used by the counts estimator.
double staggered_weight(std::uint64_t bits, int n_sites);

/// Basis weights for all 2^N outcomes (diagonal observable representation).
std::vector<double> staggered_weights(int n_sites);

/// Estimator over counts with the per-shot sample variance as std error.
Estimate staggered_magnetization_counts(const CountsHistogram& counts, int n_sites);

double staggered_magnetization_exact(const StateVector& state);

double mean_absolute_error(std::span<const double> estimates,
                           std::span<const double> references);

}  // namespace quench
