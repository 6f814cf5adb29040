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

#include "quench/density_matrix.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace quench {

double DensityMatrix::invariant_defect() const {
  const auto& r = entries;
  double worst = (r - r.adjoint()).cwiseAbs().maxCoeff();
  worst = std::max(worst, std::abs(r.trace().real() - 1.0));
  worst = std::max(worst, std::abs(r.trace().imag()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (r + r.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < 0) worst = std::max(worst, -min_ev);
  return worst;
}

DensityMatrix density_from_state(const StateVector& state) {
  const auto d = static_cast<Eigen::Index>(state.dim());
  Eigen::Map<const Eigen::VectorXcd> v(state.amplitudes.data(), d);
  DensityMatrix rho;
  rho.entries = v * v.adjoint();
  return rho;
}

DensityMatrix reduced_density_matrix(const StateVector& state,
                                     std::span<const int> subsystem) {
  if (subsystem.empty())
    throw std::invalid_argument("reduced_density_matrix: empty subsystem");
  std::set<int> uniq;
  for (int q : subsystem) {
    if (q < 0 || q >= state.n_qubits)
      throw std::out_of_range("reduced_density_matrix: qubit out of range");
    if (!uniq.insert(q).second)
      throw std::invalid_argument("reduced_density_matrix: duplicate qubit");
  }
  const int l = static_cast<int>(subsystem.size());
  const int n = state.n_qubits;
  std::vector<int> env;
  for (int q = 0; q < n; ++q)
    if (!uniq.count(q)) env.push_back(q);

  const std::uint64_t sub_dim = std::uint64_t{1} << l;
  const std::uint64_t env_dim = std::uint64_t{1} << env.size();
  DensityMatrix rho;
  rho.entries = Eigen::MatrixXcd::Zero(sub_dim, sub_dim);

  auto full_index = [&](std::uint64_t sub_bits, std::uint64_t env_bits) {
    std::uint64_t idx = 0;
    for (int k = 0; k < l; ++k) idx |= ((sub_bits >> k) & 1u) << subsystem[k];
    for (std::size_t k = 0; k < env.size(); ++k) idx |= ((env_bits >> k) & 1u) << env[k];
    return idx;
  };

  for (std::uint64_t e = 0; e < env_dim; ++e) {
    for (std::uint64_t j = 0; j < sub_dim; ++j) {
      const complex aj = state.amplitudes[full_index(j, e)];
      if (aj == complex{0.0, 0.0}) continue;
      for (std::uint64_t k = 0; k < sub_dim; ++k) {
        rho.entries(j, k) += aj * std::conj(state.amplitudes[full_index(k, e)]);
      }
    }
  }
  return rho;
}

double exact_purity(const DensityMatrix& rho) {
  return (rho.entries * rho.entries).trace().real();
}

double exact_renyi2(const StateVector& state, std::span<const int> subsystem) {
  return -std::log(exact_purity(reduced_density_matrix(state, subsystem)));
}

}  // namespace quench
