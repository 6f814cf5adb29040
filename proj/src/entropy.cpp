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

#include "quench/entropy.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

#include "quench/parallel.hpp"
#include "quench/qmp.hpp"

namespace quench {

std::array<complex, 4> sample_cue_unitary(Philox& rng) {
  // Ginibre sample, then Gram-Schmidt with the positive-diagonal R
  // convention, under which the Q factor is Haar.
  complex g[4];
  for (auto& e : g) e = complex(rng.next_normal(), rng.next_normal());
  const double n1 = std::sqrt(std::norm(g[0]) + std::norm(g[2]));
  const complex e1_0 = g[0] / n1;
  const complex e1_1 = g[2] / n1;
  const complex proj = std::conj(e1_0) * g[1] + std::conj(e1_1) * g[3];
  complex w0 = g[1] - proj * e1_0;
  complex w1 = g[3] - proj * e1_1;
  const double n2 = std::sqrt(std::norm(w0) + std::norm(w1));
  w0 /= n2;
  w1 /= n2;
  return {e1_0, w0, e1_1, w1};
}

RandomUnitaryBatch RandomUnitaryBatch::sample(int n_instances, int subsystem_size,
                                              std::uint64_t seed) {
  if (n_instances < 1 || subsystem_size < 1)
    throw std::invalid_argument("batch needs at least one instance and one site");
  RandomUnitaryBatch batch;
  batch.n_instances = n_instances;
  batch.subsystem_size = subsystem_size;
  batch.seed = seed;
  batch.unitaries.resize(n_instances);
  for (int i = 0; i < n_instances; ++i) {
    Philox rng(seed, static_cast<std::uint64_t>(i));
    batch.unitaries[i].reserve(subsystem_size);
    for (int k = 0; k < subsystem_size; ++k)
      batch.unitaries[i].push_back(sample_cue_unitary(rng));
  }
  return batch;
}

std::vector<Circuit> build_rm_circuits(const Circuit& base,
                                       std::span<const int> subsystem,
                                       const RandomUnitaryBatch& batch) {
  if (subsystem.empty()) throw std::invalid_argument("empty subsystem");
  std::set<int> uniq;
  for (int q : subsystem) {
    if (q < 0 || q >= base.n_qubits)
      throw std::out_of_range("subsystem qubit out of range");
    if (!uniq.insert(q).second) throw std::invalid_argument("duplicate subsystem qubit");
  }
  if (static_cast<int>(subsystem.size()) != batch.subsystem_size)
    throw std::invalid_argument("batch width does not match subsystem");

  std::vector<Circuit> out;
  out.reserve(batch.n_instances);
  for (int i = 0; i < batch.n_instances; ++i) {
    Circuit c = base;
    Layer& rot = c.append_layer();
    for (std::size_t k = 0; k < subsystem.size(); ++k)
      rot.gates.push_back(Gate::unitary1q(subsystem[k], batch.unitaries[i][k]));
    c.measured.assign(subsystem.begin(), subsystem.end());
    c.meta.provenance = base.meta.provenance.empty()
                            ? "rm-instance"
                            : base.meta.provenance + "+rm";
    out.push_back(std::move(c));
  }
  return out;
}

double estimate_x_a(std::span<const double> probs, int subsystem_size) {
  const std::size_t dim = std::size_t{1} << subsystem_size;
  if (probs.size() != dim) throw std::invalid_argument("probability vector size mismatch");
  const double scale = static_cast<double>(dim);
  double acc = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    const double pj = probs[j];
    if (pj == 0.0) continue;
    for (std::size_t k = 0; k < dim; ++k) {
      const double pk = probs[k];
      if (pk == 0.0) continue;
      const int d = std::popcount(j ^ k);
      acc += pj * pk * std::pow(-2.0, -d);
    }
  }
  return scale * acc;
}

double estimate_x_a(const CountsHistogram& counts, int subsystem_size,
                    bool unbiased) {
  if (counts.width != subsystem_size)
    throw std::invalid_argument("counts width does not match subsystem");
  const std::uint64_t shots = counts.total();
  if (shots == 0) throw std::invalid_argument("empty counts");
  const double scale = static_cast<double>(std::uint64_t{1} << subsystem_size);
  std::vector<std::pair<std::uint64_t, double>> entries;
  entries.reserve(counts.counts.size());
  for (const auto& [bits, n] : counts.counts)
    entries.emplace_back(bits, static_cast<double>(n));
  const double s = static_cast<double>(shots);
  double acc = 0.0;
  for (std::size_t a = 0; a < entries.size(); ++a) {
    const auto& [ja, ca] = entries[a];
    if (unbiased) {
      if (shots < 2) throw std::invalid_argument("unbiased estimator needs >= 2 shots");
      acc += ca * (ca - 1.0) / (s * (s - 1.0));
    } else {
      acc += (ca / s) * (ca / s);
    }
    for (std::size_t b = a + 1; b < entries.size(); ++b) {
      const auto& [jb, cb] = entries[b];
      const int d = std::popcount(ja ^ jb);
      acc += 2.0 * (ca / s) * (cb / s) * std::pow(-2.0, -d);
    }
  }
  return scale * acc;
}

namespace {

std::uint64_t rm_measure_seed(std::uint64_t seed, int instance) {
  return Philox::derive(seed, {0x524du /* 'RM' */, static_cast<std::uint64_t>(instance)});
}

StateVector tensor_with_spacer(const StateVector& a, const StateVector& b) {
  StateVector out(a.n_qubits + 1 + b.n_qubits);
  const std::uint64_t dim_a = a.dim();
  for (std::uint64_t ib = 0; ib < b.dim(); ++ib) {
    const complex vb = b.amplitudes[ib];
    if (vb == complex{0.0, 0.0}) continue;
    const std::uint64_t high = ib << (a.n_qubits + 1);
    for (std::uint64_t ia = 0; ia < dim_a; ++ia) {
      const complex va = a.amplitudes[ia];
      if (va != complex{0.0, 0.0}) out.amplitudes[high | ia] = va * vb;
    }
  }
  return out;
}

/// Counts for one RM instance under an optional noise model and QEM config;
/// TREX/DD/PT are circuit-level, the shot budget splits across expansions.
CountsHistogram measure_instance(const Circuit& instance, const StateVector& initial,
                                 const RenyiOptions& opt, int fold,
                                 std::uint64_t measure_seed) {
  Circuit prepared = instance;
  const MitigationConfig cfg = opt.mitigation.value_or(MitigationConfig{});
  if (fold != 1) prepared = zne_fold(prepared, fold);
  if (cfg.dd.enabled) prepared = dd_insert(prepared, cfg.dd);
  const NoiseModel noise = opt.noise.value_or(NoiseModel::noiseless());

  const int n_copies = cfg.pt.enabled ? cfg.pt.n_copies : 1;
  const int n_samples = cfg.trex.enabled ? cfg.trex.n_samples : 1;
  const std::uint64_t share =
      opt.shots / (static_cast<std::uint64_t>(n_copies) * n_samples);
  if (share == 0) throw std::invalid_argument("entropy shot budget too small");
  const int traj = std::max(1, std::min<int>(opt.n_trajectories, share));
  const std::uint64_t shots_exec = (share / traj) * traj;

  std::vector<Circuit> copies =
      cfg.pt.enabled ? pauli_twirl(prepared, n_copies, Philox::derive(measure_seed, {1}))
                     : std::vector<Circuit>{prepared};
  CountsHistogram total;
  total.width = static_cast<int>(prepared.measured_qubits().size());
  for (int ci = 0; ci < static_cast<int>(copies.size()); ++ci) {
    std::vector<TrexSample> samples;
    if (cfg.trex.enabled) {
      samples = trex_expand(copies[ci], n_samples,
                            Philox::derive(measure_seed, {2, static_cast<std::uint64_t>(ci)}));
    } else {
      samples.push_back({copies[ci], 0});
    }
    for (int si = 0; si < static_cast<int>(samples.size()); ++si) {
      const std::uint64_t exec_seed =
          Philox::derive(measure_seed, {3, static_cast<std::uint64_t>(ci),
                                        static_cast<std::uint64_t>(si)});
      const CountsHistogram counts = noisy_execute(samples[si].circuit, initial, noise,
                                                   shots_exec, traj, exec_seed);
      const CountsHistogram collapsed =
          samples[si].flip_mask ? apply_flip_mask(counts, samples[si].flip_mask) : counts;
      for (const auto& [bits, n] : collapsed.counts) total.add(bits, n);
    }
  }
  return total;
}

PurityEstimate finalize(std::vector<std::vector<double>> x_per_fold,
                        const std::vector<int>& folds, const RenyiOptions& opt,
                        int subsystem_size) {
  PurityEstimate est;
  est.x_values = x_per_fold.front();

  std::vector<ZnePoint> points;
  for (std::size_t fi = 0; fi < folds.size(); ++fi) {
    const auto& xs = x_per_fold[fi];
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double se = xs.size() > 1 ? std::sqrt(var / (xs.size() - 1) / xs.size()) : 0.0;
    points.push_back({static_cast<double>(folds[fi]), mean, se});
  }

  double mean_x = points.front().value;
  double se_x = points.front().std_error;
  if (folds.size() > 1) {
    const MitigatedEstimate z = zne_extrapolate(points, opt.mitigation->zne.fit);
    mean_x = z.mitigated;
    se_x = z.std_error;
    est.notes.push_back("ZNE applied to the instance-averaged purity estimator");
  }
  est.mean_x = mean_x;
  if (mean_x <= 0.0) {
    est.failed = true;
    est.notes.push_back("mean purity estimator non-positive; entropy undefined");
    return est;
  }
  est.renyi2 = -std::log(mean_x);
  est.std_error = se_x / mean_x;
  const double lower = std::pow(2.0, -subsystem_size);
  if (mean_x < lower - 3.0 * se_x || mean_x > 1.0 + 3.0 * se_x) {
    est.flagged = true;
    est.notes.push_back("purity estimate outside physical bounds");
  }
  return est;
}

}  // namespace

PurityEstimate estimate_renyi2(const Circuit& base, const StateVector& initial,
                               std::span<const int> subsystem,
                               const RenyiOptions& options) {
  if (options.n_instances < 2)
    throw std::invalid_argument("need at least two unitary instances");
  if (subsystem.empty() || static_cast<int>(subsystem.size()) >= base.n_qubits)
    throw std::invalid_argument("subsystem must be nonempty and proper");

  const int l = static_cast<int>(subsystem.size());
  const auto batch = RandomUnitaryBatch::sample(options.n_instances, l, options.seed);
  const auto instances = build_rm_circuits(base, subsystem, batch);

  std::vector<int> folds{1};
  if (options.mitigation && options.mitigation->zne.enabled)
    folds = options.mitigation->zne.fold_factors;

  std::vector<std::vector<double>> x_per_fold(folds.size(),
                                              std::vector<double>(instances.size()));
  const bool exact = options.shots == 0;

  if (exact) {
    const StateVector prepared = apply_circuit(initial, base);
    parallel_for(instances.size(), options.n_workers, [&](std::size_t i) {
      StateVector rotated = prepared;
      for (std::size_t k = 0; k < subsystem.size(); ++k)
        apply_gate_in_place(rotated,
                            Gate::unitary1q(subsystem[k], batch.unitaries[i][k]));
      const auto probs = marginal_probabilities(rotated, subsystem);
      x_per_fold[0][i] = estimate_x_a(probs, l);
    });
    return finalize(std::move(x_per_fold), {1}, options, l);
  }

  const bool plain_sampling = !options.noise && !options.mitigation;
  if (options.use_qmp && plain_sampling) {
    // two instances per package, one spacer qubit between them
    const StateVector packed_initial = tensor_with_spacer(initial, initial);
    const std::size_t n_pairs = instances.size() / 2;
    parallel_for(n_pairs, options.n_workers, [&](std::size_t pi) {
      const std::size_t i = 2 * pi;
      auto [merged, layout] = pack(instances[i], instances[i + 1]);
      const StateVector out = apply_circuit(packed_initial, merged);
      const CountsHistogram counts =
          sample_packed(out, merged, layout, options.shots,
                        rm_measure_seed(options.seed, static_cast<int>(i)),
                        rm_measure_seed(options.seed, static_cast<int>(i + 1)));
      const auto [ca, cb] = split_counts(counts, layout);
      x_per_fold[0][i] = estimate_x_a(ca, l, options.unbiased);
      x_per_fold[0][i + 1] = estimate_x_a(cb, l, options.unbiased);
    });
    if (instances.size() % 2 == 1) {
      const std::size_t i = instances.size() - 1;
      const StateVector out = apply_circuit(initial, instances[i]);
      const CountsHistogram counts =
          sample_counts(out, options.shots, rm_measure_seed(options.seed, static_cast<int>(i)),
                        instances[i].measured_qubits());
      x_per_fold[0][i] = estimate_x_a(counts, l, options.unbiased);
    }
    return finalize(std::move(x_per_fold), {1}, options, l);
  }

  parallel_for(instances.size(), options.n_workers, [&](std::size_t i) {
    const std::uint64_t mseed = rm_measure_seed(options.seed, static_cast<int>(i));
    for (std::size_t fi = 0; fi < folds.size(); ++fi) {
      if (plain_sampling) {
        // noiseless sampling path shares its seed discipline with the packed
        // runner so QMP equivalence is bit-exact
        const StateVector out = apply_circuit(initial, instances[i]);
        const CountsHistogram counts =
            sample_counts(out, options.shots, mseed, instances[i].measured_qubits());
        x_per_fold[fi][i] = estimate_x_a(counts, l, options.unbiased);
      } else {
        const CountsHistogram counts = measure_instance(
            instances[i], initial, options, folds[fi],
            Philox::derive(mseed, {static_cast<std::uint64_t>(folds[fi])}));
        x_per_fold[fi][i] = estimate_x_a(counts, l, options.unbiased);
      }
    }
  });
  return finalize(std::move(x_per_fold), folds, options, l);
}

PurityEstimate estimate_renyi2(const StateVector& state,
                               std::span<const int> subsystem,
                               const RenyiOptions& options) {
  Circuit empty;
  empty.n_qubits = state.n_qubits;
  return estimate_renyi2(empty, state, subsystem, options);
}

}  // namespace quench
