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

#include "quench/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace quench {

double staggered_weight(std::uint64_t bits, int n_sites) {
  double acc = 0.0;
  for (int q = 0; q < n_sites; ++q) {
    const double sz = ((bits >> q) & 1u) ? -0.5 : 0.5;   // bit 0 is spin-up
    const double sign = (q % 2 == 0) ? -1.0 : 1.0;       // site i = q+1 in (-1)^i
    acc += sign * sz;
  }
  return acc / n_sites;
}

std::vector<double> staggered_weights(int n_sites) {
  std::vector<double> w(std::uint64_t{1} << n_sites);
  for (std::uint64_t i = 0; i < w.size(); ++i) w[i] = staggered_weight(i, n_sites);
  return w;
}

Estimate staggered_magnetization_counts(const CountsHistogram& counts, int n_sites) {
  if (counts.width != n_sites)
    throw std::invalid_argument("counts width does not match site count");
  const std::uint64_t shots = counts.total();
  if (shots == 0) throw std::invalid_argument("empty counts");
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& [bits, n] : counts.counts) {
    const double w = staggered_weight(bits, n_sites);
    sum += n * w;
    sum_sq += n * w * w;
  }
  const double mean = sum / shots;
  Estimate e;
  e.value = mean;
  if (shots > 1) {
    const double var = (sum_sq - shots * mean * mean) / (shots - 1);
    e.std_error = std::sqrt(std::max(0.0, var) / shots);
  }
  return e;
}

double staggered_magnetization_exact(const StateVector& state) {
  double acc = 0.0;
  const std::uint64_t dim = state.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    const double p = std::norm(state.amplitudes[i]);
    if (p != 0.0) acc += p * staggered_weight(i, state.n_qubits);
  }
  return acc;
}

double mean_absolute_error(std::span<const double> estimates,
                           std::span<const double> references) {
  if (estimates.size() != references.size() || estimates.empty())
    throw std::invalid_argument("series length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i)
    acc += std::abs(estimates[i] - references[i]);
  return acc / estimates.size();
}

}  // namespace quench
