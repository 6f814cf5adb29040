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

#include "quench/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "quench/parallel.hpp"
#include "quench/rng.hpp"

namespace quench {

void MitigationConfig::validate() const {
  if (trex.enabled && trex.n_samples < 1)
    throw std::invalid_argument("TREX needs at least one sample");
  if (pt.enabled && pt.n_copies < 1)
    throw std::invalid_argument("PT needs at least one copy");
  if (zne.enabled) {
    const auto& f = zne.fold_factors;
    if (f.size() < 2) throw std::invalid_argument("ZNE needs at least two fold factors");
    if (f.front() != 1) throw std::invalid_argument("ZNE fold factors must start at 1");
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] < 1 || f[i] % 2 == 0)
        throw std::invalid_argument("ZNE fold factors must be odd positive integers");
      if (i > 0 && f[i] <= f[i - 1])
        throw std::invalid_argument("ZNE fold factors must be strictly increasing");
    }
  }
}

std::string MitigationConfig::summary() const {
  std::string s;
  auto add = [&s](const char* name) {
    if (!s.empty()) s += '+';
    s += name;
  };
  if (trex.enabled) add("TREX");
  if (dd.enabled) add("DD");
  if (pt.enabled) add("PT");
  if (zne.enabled) add("ZNE");
  if (sm.enabled) add("SM");
  return s.empty() ? "NOQEM" : s;
}

// ---------------------------------------------------------------------------
// Twirl table
// ---------------------------------------------------------------------------

namespace {

using Mat4 = std::array<complex, 16>;

Mat4 mat_mul(const Mat4& a, const Mat4& b) {
  Mat4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      complex s = 0.0;
      for (int k = 0; k < 4; ++k) s += a[4 * r + k] * b[4 * k + c];
      out[4 * r + c] = s;
    }
  return out;
}

Mat4 mat_adjoint(const Mat4& a) {
  Mat4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[4 * r + c] = std::conj(a[4 * c + r]);
  return out;
}

std::array<complex, 4> pauli_matrix(int code) {
  const complex i(0.0, 1.0);
  switch (code) {
    case 0: return {1, 0, 0, 1};
    case 1: return {0, 1, 1, 0};
    case 2: return {0, -i, i, 0};
    default: return {1, 0, 0, -1};
  }
}

/// kron(P_{q1}, P_{q0}) in the |b1 b0> basis.
Mat4 pauli_pair_matrix(int p_q0, int p_q1) {
  const auto a = pauli_matrix(p_q1);
  const auto b = pauli_matrix(p_q0);
  Mat4 out{};
  for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1)
      for (int r0 = 0; r0 < 2; ++r0)
        for (int c0 = 0; c0 < 2; ++c0)
          out[4 * (2 * r1 + r0) + (2 * c1 + c0)] = a[2 * r1 + c1] * b[2 * r0 + c0];
  return out;
}

std::array<TwirlTable::Entry, 16> build_entries(const Mat4& g) {
  const Mat4 g_dag = mat_adjoint(g);
  std::array<TwirlTable::Entry, 16> entries;
  for (int k = 0; k < 16; ++k) {
    const int pa = k & 3;
    const int pb = k >> 2;
    const Mat4 conj = mat_mul(g, mat_mul(pauli_pair_matrix(pa, pb), g_dag));
    bool found = false;
    for (int k2 = 0; k2 < 16 && !found; ++k2) {
      const Mat4 cand = pauli_pair_matrix(k2 & 3, k2 >> 2);
      complex tr = 0.0;
      for (int d = 0; d < 4; ++d)
        for (int c = 0; c < 4; ++c) tr += std::conj(cand[4 * d + c]) * conj[4 * d + c];
      if (std::abs(std::abs(tr) - 4.0) < 1e-9) {
        entries[k] = {static_cast<std::uint8_t>(pa), static_cast<std::uint8_t>(pb),
                      static_cast<std::uint8_t>(k2 & 3),
                      static_cast<std::uint8_t>(k2 >> 2)};
        found = true;
      }
    }
    if (!found) throw std::logic_error("twirl table: conjugate is not a Pauli pair");
    // sandwich identity check: After * G * Before == G up to global phase
    const auto& e = entries[k];
    const Mat4 sandwich =
        mat_mul(pauli_pair_matrix(e.after_q0, e.after_q1),
                mat_mul(g, pauli_pair_matrix(e.before_q0, e.before_q1)));
    complex tr = 0.0;
    for (int d = 0; d < 4; ++d)
      for (int c = 0; c < 4; ++c) tr += std::conj(g[4 * d + c]) * sandwich[4 * d + c];
    if (std::abs(std::abs(tr) - 4.0) > 1e-9)
      throw std::logic_error("twirl table: sandwich identity violated");
  }
  return entries;
}

TwirlTable build_twirl_table() {
  TwirlTable t;
  t.cx = build_entries(gate_matrix_2q(Gate::cx(0, 1)));
  t.cz = build_entries(gate_matrix_2q(Gate::cz(0, 1)));
  return t;
}

}  // namespace

const TwirlTable& TwirlTable::instance() {
  static const TwirlTable table = build_twirl_table();
  return table;
}

// ---------------------------------------------------------------------------
// TREX
// ---------------------------------------------------------------------------

std::vector<TrexSample> trex_expand(const Circuit& circuit, int n_samples,
                                    std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("TREX needs at least one sample");
  const auto measured = circuit.measured_qubits();
  Philox rng(seed);
  std::vector<TrexSample> out;
  out.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < measured.size(); ++k)
      if (rng.next_double() < 0.5) mask |= std::uint64_t{1} << k;
    TrexSample sample;
    sample.circuit = circuit;
    sample.flip_mask = mask;
    if (mask != 0) {
      Layer& flips = sample.circuit.append_layer(0.0);
      for (std::size_t k = 0; k < measured.size(); ++k)
        if ((mask >> k) & 1u) flips.gates.push_back(Gate::x(measured[k]));
    }
    out.push_back(std::move(sample));
  }
  return out;
}

CountsHistogram apply_flip_mask(const CountsHistogram& counts, std::uint64_t mask) {
  CountsHistogram out;
  out.width = counts.width;
  for (const auto& [bits, n] : counts.counts) out.add(bits ^ mask, n);
  return out;
}

CountsHistogram trex_collapse(
    std::span<const std::pair<CountsHistogram, std::uint64_t>> results) {
  if (results.empty()) throw std::invalid_argument("trex_collapse: no histograms");
  CountsHistogram out;
  out.width = results.front().first.width;
  for (const auto& [h, mask] : results) {
    if (h.width != out.width)
      throw std::invalid_argument("trex_collapse: width mismatch");
    for (const auto& [bits, n] : h.counts) out.add(bits ^ mask, n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dynamical decoupling
// ---------------------------------------------------------------------------

Circuit dd_insert(const Circuit& circuit, const MitigationConfig::Dd& spec) {
  struct Window {
    int qubit;
    int first;
    int last;
    double duration;
  };
  const int n_layers = circuit.depth();

  // busy map (gate of any kind occupies a qubit for its layer)
  std::vector<std::vector<char>> busy(n_layers, std::vector<char>(circuit.n_qubits, 0));
  for (int l = 0; l < n_layers; ++l)
    for (const auto& g : circuit.layers[l].gates) {
      busy[l][g.q0] = 1;
      if (g.two_qubit()) busy[l][g.q1] = 1;
    }

  std::vector<Window> windows;
  std::vector<SkippedWindow> skipped;
  for (int q = 0; q < circuit.n_qubits; ++q) {
    int start = -1;
    double dur = 0.0;
    for (int l = 0; l <= n_layers; ++l) {
      const bool idle = l < n_layers && !busy[l][q];
      if (idle) {
        if (start < 0) {
          start = l;
          dur = 0.0;
        }
        dur += circuit.layers[l].duration;
      } else if (start >= 0) {
        if (dur > 0.0 && dur >= spec.min_window)
          windows.push_back({q, start, l - 1, dur});
        else if (dur > 0.0)
          skipped.push_back({q, start, l - 1, dur});
        start = -1;
      }
    }
  }

  // echo sequences starting before each window's first layer
  std::vector<std::vector<Window>> starting_at(n_layers);
  for (const auto& w : windows) starting_at[w.first].push_back(w);

  Circuit out;
  out.n_qubits = circuit.n_qubits;
  out.measured = circuit.measured;
  out.meta = circuit.meta;
  out.meta.provenance += out.meta.provenance.empty() ? "dd" : "+dd";
  out.meta.skipped_windows.insert(out.meta.skipped_windows.end(), skipped.begin(),
                                  skipped.end());

  std::vector<std::vector<char>> occupy(n_layers, std::vector<char>(circuit.n_qubits, 0));
  for (const auto& w : windows)
    for (int l = w.first; l <= w.last; ++l) occupy[l][w.qubit] = 1;

  for (int l = 0; l < n_layers; ++l) {
    if (!starting_at[l].empty()) {
      std::array<Layer, 5> seq;
      for (auto& s : seq) s.duration = 0.0;
      for (const auto& w : starting_at[l]) {
        seq[0].gates.push_back(Gate::delay(w.qubit, 0.25 * w.duration));
        seq[1].gates.push_back(Gate::x(w.qubit));
        seq[2].gates.push_back(Gate::delay(w.qubit, 0.5 * w.duration));
        seq[3].gates.push_back(Gate::x(w.qubit));
        seq[4].gates.push_back(Gate::delay(w.qubit, 0.25 * w.duration));
      }
      for (auto& s : seq) out.layers.push_back(std::move(s));
    }
    Layer layer = circuit.layers[l];
    for (int q = 0; q < circuit.n_qubits; ++q)
      if (occupy[l][q]) layer.gates.push_back(Gate::delay(q, 0.0));
    out.layers.push_back(std::move(layer));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pauli twirling
// ---------------------------------------------------------------------------

std::vector<Circuit> pauli_twirl(const Circuit& circuit, int n_copies,
                                 std::uint64_t seed) {
  if (n_copies < 1) throw std::invalid_argument("PT needs at least one copy");
  const TwirlTable& table = TwirlTable::instance();
  std::vector<Circuit> copies;
  copies.reserve(n_copies);
  for (int c = 0; c < n_copies; ++c) {
    Philox rng(seed, static_cast<std::uint64_t>(c));
    Circuit copy;
    copy.n_qubits = circuit.n_qubits;
    copy.measured = circuit.measured;
    copy.meta = circuit.meta;
    copy.meta.provenance += copy.meta.provenance.empty() ? "pt" : "+pt";
    for (const auto& layer : circuit.layers) {
      Layer before;
      before.duration = 0.0;
      Layer after;
      after.duration = 0.0;
      for (const auto& g : layer.gates) {
        if (!g.two_qubit()) continue;
        const auto& entries = (g.kind == GateKind::CX) ? table.cx : table.cz;
        const auto& e = entries[rng.next_below(16)];
        if (e.before_q0) before.gates.push_back(Gate::pauli(g.q0, e.before_q0));
        if (e.before_q1) before.gates.push_back(Gate::pauli(g.q1, e.before_q1));
        if (e.after_q0) after.gates.push_back(Gate::pauli(g.q0, e.after_q0));
        if (e.after_q1) after.gates.push_back(Gate::pauli(g.q1, e.after_q1));
      }
      if (!before.gates.empty()) copy.layers.push_back(std::move(before));
      copy.layers.push_back(layer);
      if (!after.gates.empty()) copy.layers.push_back(std::move(after));
    }
    copies.push_back(std::move(copy));
  }
  return copies;
}

// ---------------------------------------------------------------------------
// ZNE
// ---------------------------------------------------------------------------

Circuit zne_fold(const Circuit& circuit, int factor) {
  if (factor < 1 || factor % 2 == 0)
    throw std::invalid_argument("fold factor must be an odd positive integer");
  if (factor == 1) return circuit;
  Circuit out;
  out.n_qubits = circuit.n_qubits;
  out.measured = circuit.measured;
  out.meta = circuit.meta;
  out.meta.provenance += "+fold" + std::to_string(factor);
  for (const auto& layer : circuit.layers) {
    out.layers.push_back(layer);
    Layer replica;
    replica.duration = layer.duration;
    for (const auto& g : layer.gates)
      if (g.two_qubit()) replica.gates.push_back(g);
    if (replica.gates.empty()) continue;
    for (int r = 0; r < factor - 1; ++r) out.layers.push_back(replica);
  }
  return out;
}

namespace {

struct LineFit {
  double intercept = 0.0;
  double intercept_var = 0.0;
  double slope = 0.0;
};

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> sigma) {
  const std::size_t n = x.size();
  bool weighted = true;
  for (double s : sigma)
    if (!(s > 0.0)) weighted = false;
  double sw = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weighted ? 1.0 / (sigma[i] * sigma[i]) : 1.0;
    sw += w;
    sx += w * x[i];
    sxx += w * x[i] * x[i];
    sy += w * y[i];
    sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("degenerate fit abscissae");
  LineFit f;
  f.intercept = (sxx * sy - sx * sxy) / det;
  f.slope = (sw * sxy - sx * sy) / det;
  if (weighted) {
    f.intercept_var = sxx / det;
  } else if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (f.intercept + f.slope * x[i]);
      rss += r * r;
    }
    const double s2 = rss / (n - 2);
    f.intercept_var = s2 * sxx / det;
  }
  return f;
}

}  // namespace

MitigatedEstimate zne_extrapolate(std::span<const ZnePoint> points, ZneFit fit) {
  if (points.size() < 2)
    throw std::invalid_argument("ZNE extrapolation needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i].factor == points[j].factor)
        throw std::invalid_argument("ZNE points have duplicate factors");

  MitigatedEstimate est;
  est.zne_points.assign(points.begin(), points.end());
  const auto base = std::min_element(points.begin(), points.end(),
                                     [](const ZnePoint& a, const ZnePoint& b) {
                                       return a.factor < b.factor;
                                     });
  est.raw = base->value;

  std::vector<double> x, y, s;
  for (const auto& p : points) {
    x.push_back(p.factor);
    y.push_back(p.value);
    s.push_back(p.std_error);
  }

  if (fit == ZneFit::Exponential) {
    bool positive = true, negative = true;
    for (double v : y) {
      positive = positive && v > 0.0;
      negative = negative && v < 0.0;
    }
    if (positive || negative) {
      const double sign = positive ? 1.0 : -1.0;
      std::vector<double> ly(y.size()), ls(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) {
        ly[i] = std::log(std::abs(y[i]));
        ls[i] = s[i] > 0.0 ? s[i] / std::abs(y[i]) : 0.0;
      }
      const LineFit f = weighted_line_fit(x, ly, ls);
      if (f.slope <= 0.0) {  // decay rate b = -slope must be >= 0
        est.mitigated = sign * std::exp(f.intercept);
        est.std_error = std::abs(est.mitigated) * std::sqrt(std::max(0.0, f.intercept_var));
        return est;
      }
      // growing exponential: fall through to the linear fit
    }
    est.flagged = true;
    est.flag_reason = "exponential fit unavailable (sign change or growth); linear used";
  }

  const LineFit f = weighted_line_fit(x, y, s);
  est.mitigated = f.intercept;
  est.std_error = std::sqrt(std::max(0.0, f.intercept_var));
  return est;
}

// ---------------------------------------------------------------------------
// Self-mitigation
// ---------------------------------------------------------------------------

MitigatedEstimate sm_mitigate(double target_raw, double test_raw, double test_ideal,
                              double target_err, double test_err) {
  MitigatedEstimate est;
  est.raw = target_raw;
  if (std::abs(test_ideal) < kSmDeadZone) {
    est.mitigated = target_raw;
    est.std_error = target_err;
    est.flagged = true;
    est.flag_reason = "test ideal inside dead zone; mitigation refused";
    return est;
  }
  const double p = 1.0 - test_raw / test_ideal;
  est.noise_factor = p;
  if (p >= kSmMaxNoiseFactor) {
    est.mitigated = target_raw;
    est.std_error = target_err;
    est.flagged = true;
    est.flag_reason = "noise factor exceeds p_max; signal exhausted";
    return est;
  }
  est.mitigated = target_raw / (1.0 - p);
  const double d_target = test_ideal / test_raw;
  const double d_test = target_raw * test_ideal / (test_raw * test_raw);
  est.std_error = std::sqrt(d_target * d_target * target_err * target_err +
                            d_test * d_test * test_err * test_err);
  return est;
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

namespace {

struct ExecJob {
  const Circuit* circuit;
  std::uint64_t mask;
  std::uint64_t seed;
  int slot;  // index into per-fold value pools
};

struct Pool {
  std::vector<double> values;  // per-trajectory observable values
};

double observable_from_counts(const ObservableSpec& obs, const CountsHistogram& counts) {
  switch (obs.kind) {
    case ObservableKind::StaggeredMagnetization:
      return staggered_magnetization_counts(counts, obs.n_sites).value;
  }
  throw std::logic_error("unknown observable");
}

Estimate pool_stats(const std::vector<double>& values) {
  Estimate e;
  const std::size_t n = values.size();
  if (n == 0) throw std::logic_error("empty value pool");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  e.value = mean;
  if (n > 1) {
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (n - 1);
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

}  // namespace

std::vector<StepResult> run_mitigated_experiment(
    const XXZParams& params, const NoiseModel& noise, const MitigationConfig& config,
    const ObservableSpec& observable, std::uint64_t shots, std::uint64_t seed,
    int n_trajectories, int n_workers) {
  params.validate();
  noise.validate();
  config.validate();
  if (observable.n_sites != params.n_sites)
    throw std::invalid_argument("observable width does not match chain length");

  const bool sm_and_zne = config.sm.enabled && config.zne.enabled;
  std::vector<int> folds{1};
  if (config.zne.enabled && !sm_and_zne) folds = config.zne.fold_factors;

  const int n_copies = config.pt.enabled ? config.pt.n_copies : 1;
  const int n_samples = config.trex.enabled ? config.trex.n_samples : 1;
  const std::uint64_t shots_per_exec =
      shots / (static_cast<std::uint64_t>(n_copies) * n_samples);
  if (shots_per_exec == 0)
    throw std::invalid_argument("shot budget too small for the expansion");
  const int traj = std::max(1, std::min<int>(n_trajectories, shots_per_exec));
  const std::uint64_t shots_exec = (shots_per_exec / traj) * traj;
  if (shots_exec == 0) throw std::invalid_argument("shot budget too small");

  const StateVector initial = neel_state(params.n_sites);

  std::vector<StepResult> results;
  for (int m = 1; m <= params.n_steps; ++m) {
    XXZParams pm = params;
    pm.n_steps = m;
    const Circuit target = build_trotter_circuit(pm, TrotterOrder::SecondOptimized);

    StepResult step;
    step.step = m;
    step.time = m * params.step_size;
    if (sm_and_zne && m == 1)
      step.notes.push_back("SM and ZNE both requested: SM applied at fold 1, ZNE skipped");

    // assemble the execution plan: targets per fold, plus the SM test batch
    struct Batch {
      Circuit circuit;        // after fold + dd
      int fold = 1;
      bool is_test = false;
    };
    std::vector<Batch> batches;
    for (int f : folds) {
      Batch b;
      b.circuit = (f == 1) ? target : zne_fold(target, f);
      if (config.dd.enabled)
        b.circuit = dd_insert(b.circuit, config.dd);
      b.fold = f;
      batches.push_back(std::move(b));
    }
    Circuit test_circuit;
    double test_ideal = 0.0;
    if (config.sm.enabled) {
      test_circuit = build_sm_test_circuit(pm);
      if (test_circuit.meta.odd_step_test) {
        const StateVector ideal_state = apply_circuit(initial, test_circuit);
        test_ideal = staggered_magnetization_exact(ideal_state);
        step.notes.push_back("odd step: SM test circuit is not an identity");
      } else {
        test_ideal = staggered_magnetization_exact(initial);
      }
      Batch b;
      b.circuit = config.dd.enabled ? dd_insert(test_circuit, config.dd) : test_circuit;
      b.is_test = true;
      batches.push_back(std::move(b));
    }

    // expand each batch into (copy, sample) executions
    std::vector<Circuit> circuits;  // owned storage for twirled/flipped variants
    std::vector<ExecJob> jobs;
    std::vector<Pool> pools(batches.size());
    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
      const Batch& b = batches[bi];
      const std::uint64_t kind_tag = b.is_test ? 1'000'000u : static_cast<std::uint64_t>(b.fold);
      std::vector<Circuit> copies =
          config.pt.enabled
              ? pauli_twirl(b.circuit, n_copies, Philox::derive(seed, {static_cast<std::uint64_t>(m), kind_tag, 1}))
              : std::vector<Circuit>{b.circuit};
      for (int ci = 0; ci < static_cast<int>(copies.size()); ++ci) {
        if (config.trex.enabled) {
          auto samples = trex_expand(
              copies[ci], n_samples,
              Philox::derive(seed, {static_cast<std::uint64_t>(m), kind_tag, 2,
                                    static_cast<std::uint64_t>(ci)}));
          for (int si = 0; si < static_cast<int>(samples.size()); ++si) {
            circuits.push_back(std::move(samples[si].circuit));
            jobs.push_back({nullptr, samples[si].flip_mask,
                            Philox::derive(seed, {static_cast<std::uint64_t>(m), kind_tag, 3,
                                                  static_cast<std::uint64_t>(ci),
                                                  static_cast<std::uint64_t>(si)}),
                            static_cast<int>(bi)});
          }
        } else {
          circuits.push_back(copies[ci]);
          jobs.push_back({nullptr, 0,
                          Philox::derive(seed, {static_cast<std::uint64_t>(m), kind_tag, 3,
                                                static_cast<std::uint64_t>(ci), 0}),
                          static_cast<int>(bi)});
        }
      }
    }
    for (std::size_t j = 0; j < jobs.size(); ++j) jobs[j].circuit = &circuits[j];

    // execute
    std::vector<std::vector<double>> job_values(jobs.size());
    parallel_for(jobs.size(), n_workers, [&](std::size_t j) {
      const ExecJob& job = jobs[j];
      const auto trajectories = noisy_execute_trajectories(
          *job.circuit, initial, noise, shots_exec, traj, job.seed);
      std::vector<double> vals;
      vals.reserve(trajectories.size());
      for (const auto& t : trajectories) {
        const CountsHistogram collapsed =
            job.mask ? apply_flip_mask(t.counts, job.mask) : t.counts;
        vals.push_back(observable_from_counts(observable, collapsed));
      }
      job_values[j] = std::move(vals);
    });
    for (std::size_t j = 0; j < jobs.size(); ++j)
      pools[jobs[j].slot].values.insert(pools[jobs[j].slot].values.end(),
                                        job_values[j].begin(), job_values[j].end());

    step.circuits_executed = jobs.size();
    step.shots_total = shots_exec * jobs.size();

    // reduce
    std::vector<ZnePoint> points;
    Estimate raw_est;
    Estimate test_est;
    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
      const Estimate e = pool_stats(pools[bi].values);
      if (batches[bi].is_test) {
        test_est = e;
      } else {
        if (batches[bi].fold == 1) raw_est = e;
        points.push_back({static_cast<double>(batches[bi].fold), e.value, e.std_error});
      }
    }

    if (config.zne.enabled && !sm_and_zne) {
      step.estimate = zne_extrapolate(points, config.zne.fit);
    } else if (config.sm.enabled) {
      step.estimate = sm_mitigate(raw_est.value, test_est.value, test_ideal,
                                  raw_est.std_error, test_est.std_error);
    } else {
      step.estimate.raw = raw_est.value;
      step.estimate.mitigated = raw_est.value;
      step.estimate.std_error = raw_est.std_error;
    }
    results.push_back(std::move(step));
  }
  return results;
}

}  // namespace quench
