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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quench/circuit.hpp"
#include "quench/counts.hpp"
#include "quench/noise.hpp"
#include "quench/observables.hpp"
#include "quench/xxz.hpp"

namespace quench {

enum class ZneFit { Linear, Exponential };

struct MitigationConfig {
  struct Trex {
    bool enabled = false;
    int n_samples = 10;
  } trex;
  struct Dd {
    bool enabled = false;
    double min_window = 0.0;  // windows shorter than this are left untouched
  } dd;
  struct Pt {
    bool enabled = false;
    int n_copies = 10;
  } pt;
  struct Zne {
    bool enabled = false;
    std::vector<int> fold_factors{1, 3, 5};
    ZneFit fit = ZneFit::Linear;
  } zne;
  struct Sm {
    bool enabled = false;
  } sm;

  void validate() const;
  std::string summary() const;  // e.g. "TREX+DD+PT+SM", "NOQEM"
};

struct ZnePoint {
  double factor = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct MitigatedEstimate {
  double raw = 0.0;
  double mitigated = 0.0;
  double std_error = 0.0;
  std::optional<double> noise_factor;  // SM's p
  std::vector<ZnePoint> zne_points;
  bool flagged = false;
  std::string flag_reason;
};

/// Conjugation table of the 16 two-qubit Pauli frames through a Clifford
/// gate: sandwiching the gate between entry (before, after) reproduces the
/// bare gate up to a global sign. Verified on construction.
struct TwirlTable {
  struct Entry {
    std::uint8_t before_q0 = 0, before_q1 = 0;  // pauli codes 0..3 (I,X,Y,Z)
    std::uint8_t after_q0 = 0, after_q1 = 0;
  };
  std::array<Entry, 16> cx;
  std::array<Entry, 16> cz;

  static const TwirlTable& instance();
};

/// Random pre-measurement X flips. Each sample appends X gates on a random
/// subset of measured qubits (mask bit k is measured qubit k) in a
/// zero-duration layer.
struct TrexSample {
  Circuit circuit;
  std::uint64_t flip_mask = 0;
};
std::vector<TrexSample> trex_expand(const Circuit& circuit, int n_samples,
                                    std::uint64_t seed);

/// XOR every histogram's keys with its mask, then sum.
CountsHistogram trex_collapse(
    std::span<const std::pair<CountsHistogram, std::uint64_t>> results);
CountsHistogram apply_flip_mask(const CountsHistogram& counts, std::uint64_t mask);

/// Replace every maximal idle window of duration tau with the echo sequence
/// delay tau/4, X, delay tau/2, X, delay tau/4. Windows shorter than
/// min_window are left untouched and recorded in metadata.
Circuit dd_insert(const Circuit& circuit, const MitigationConfig::Dd& spec = {});

/// n_copies circuits with every CX/CZ independently wrapped in a random
/// twirl frame; each copy is unitarily equivalent to the original.
std::vector<Circuit> pauli_twirl(const Circuit& circuit, int n_copies,
                                 std::uint64_t seed);

/// Local unitary folding: each two-qubit gate layer is repeated `factor`
/// times (factor odd), leaving the ideal unitary unchanged.
Circuit zne_fold(const Circuit& circuit, int factor);

MitigatedEstimate zne_extrapolate(std::span<const ZnePoint> points, ZneFit fit);

/// Depolarizing-factor rescale: p = 1 - test_raw/test_ideal, mitigated =
/// target_raw / (1 - p). Refuses when |test_ideal| is inside the dead zone
/// or p exceeds p_max (returns the raw value flagged).
MitigatedEstimate sm_mitigate(double target_raw, double test_raw, double test_ideal,
                              double target_err = 0.0, double test_err = 0.0);

inline constexpr double kSmDeadZone = 0.05;
inline constexpr double kSmMaxNoiseFactor = 0.95;

/// One Trotter step's outcome plus execution bookkeeping.
struct StepResult {
  int step = 0;
  double time = 0.0;
  MitigatedEstimate estimate;
  std::uint64_t circuits_executed = 0;
  std::uint64_t shots_total = 0;
  std::vector<std::string> notes;
};

/// Full per-step pipeline: build target (and SM test) circuits, apply
/// DD/PT/TREX expansions, execute under noise, collapse and post-process.
/// Shots are split evenly across PT copies and TREX samples; each ZNE fold
/// factor gets the full per-step budget. When SM and ZNE are both enabled,
/// SM runs at fold factor 1 and ZNE is skipped (noted in the result).
std::vector<StepResult> run_mitigated_experiment(
    const XXZParams& params, const NoiseModel& noise, const MitigationConfig& config,
    const ObservableSpec& observable, std::uint64_t shots, std::uint64_t seed,
    int n_trajectories = 10, int n_workers = 1);

}  // namespace quench
