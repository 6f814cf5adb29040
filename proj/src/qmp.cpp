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

#include "quench/qmp.hpp"

#include <sstream>
#include <stdexcept>

#include "quench/rng.hpp"

namespace quench {

std::string PackLayout::serialize() const {
  std::ostringstream os;
  os << "widths=" << width_a << ',' << width_b << " spacer=" << spacer << " a=";
  for (std::size_t i = 0; i < measured_bits_a.size(); ++i)
    os << (i ? "," : "") << measured_bits_a[i];
  os << " b=";
  for (std::size_t i = 0; i < measured_bits_b.size(); ++i)
    os << (i ? "," : "") << measured_bits_b[i];
  return os.str();
}

PackLayout PackLayout::parse(const std::string& text) {
  PackLayout l;
  std::istringstream is(text);
  std::string tok;
  auto parse_list = [](const std::string& csv) {
    std::vector<int> out;
    std::istringstream ls(csv);
    std::string item;
    while (std::getline(ls, item, ','))
      if (!item.empty()) out.push_back(std::stoi(item));
    return out;
  };
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad layout token: " + tok);
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "widths") {
      const auto v = parse_list(val);
      if (v.size() != 2) throw std::runtime_error("bad layout widths");
      l.width_a = v[0];
      l.width_b = v[1];
    } else if (key == "spacer") {
      l.spacer = std::stoi(val);
    } else if (key == "a") {
      l.measured_bits_a = parse_list(val);
    } else if (key == "b") {
      l.measured_bits_b = parse_list(val);
    } else {
      throw std::runtime_error("unknown layout key: " + key);
    }
  }
  l.merged_width = static_cast<int>(l.measured_bits_a.size() + l.measured_bits_b.size());
  return l;
}

std::pair<Circuit, PackLayout> pack(const Circuit& a, const Circuit& b) {
  PackLayout layout;
  layout.width_a = a.n_qubits;
  layout.width_b = b.n_qubits;
  layout.spacer = a.n_qubits;
  const int shift = a.n_qubits + 1;

  Circuit merged;
  merged.n_qubits = a.n_qubits + 1 + b.n_qubits;
  merged.meta.provenance = "qmp-pack";
  const std::size_t n_layers = std::max(a.layers.size(), b.layers.size());
  for (std::size_t l = 0; l < n_layers; ++l) {
    Layer layer;
    layer.duration = 0.0;
    if (l < a.layers.size()) {
      layer.duration = std::max(layer.duration, a.layers[l].duration);
      for (const auto& g : a.layers[l].gates) layer.gates.push_back(g);
    }
    if (l < b.layers.size()) {
      layer.duration = std::max(layer.duration, b.layers[l].duration);
      for (Gate g : b.layers[l].gates) {
        g.q0 += shift;
        if (g.two_qubit()) g.q1 += shift;
        layer.gates.push_back(g);
      }
    }
    merged.layers.push_back(std::move(layer));
  }

  const auto ma = a.measured_qubits();
  const auto mb = b.measured_qubits();
  for (int q : ma) merged.measured.push_back(q);
  for (int q : mb) merged.measured.push_back(q + shift);
  for (int i = 0; i < static_cast<int>(ma.size()); ++i)
    layout.measured_bits_a.push_back(i);
  for (int i = 0; i < static_cast<int>(mb.size()); ++i)
    layout.measured_bits_b.push_back(static_cast<int>(ma.size()) + i);
  layout.merged_width = static_cast<int>(ma.size() + mb.size());
  return {std::move(merged), layout};
}

namespace {

std::uint64_t extract_bits(std::uint64_t merged, const std::vector<int>& positions) {
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < positions.size(); ++k)
    out |= ((merged >> positions[k]) & 1u) << k;
  return out;
}

}  // namespace

std::pair<CountsHistogram, CountsHistogram> split_counts(const CountsHistogram& counts,
                                                         const PackLayout& layout) {
  if (counts.width != layout.merged_width)
    throw std::invalid_argument("merged counts width does not match layout");
  CountsHistogram a, b;
  a.width = static_cast<int>(layout.measured_bits_a.size());
  b.width = static_cast<int>(layout.measured_bits_b.size());
  for (const auto& [bits, n] : counts.counts) {
    a.add(extract_bits(bits, layout.measured_bits_a), n);
    b.add(extract_bits(bits, layout.measured_bits_b), n);
  }
  return {std::move(a), std::move(b)};
}

CountsHistogram sample_packed(const StateVector& packed_state, const Circuit& merged,
                              const PackLayout& layout, std::uint64_t shots,
                              std::uint64_t seed_a, std::uint64_t seed_b) {
  const auto measured = merged.measured_qubits();
  if (static_cast<int>(measured.size()) != layout.merged_width)
    throw std::invalid_argument("merged measured list does not match layout");
  std::vector<int> qubits_a, qubits_b;
  for (int pos : layout.measured_bits_a) qubits_a.push_back(measured[pos]);
  for (int pos : layout.measured_bits_b) qubits_b.push_back(measured[pos]);

  const auto probs_a = marginal_probabilities(packed_state, qubits_a);
  const auto probs_b = marginal_probabilities(packed_state, qubits_b);
  Philox rng_a(seed_a), rng_b(seed_b);
  const auto outcomes_a = sample_outcomes(probs_a, shots, rng_a);
  const auto outcomes_b = sample_outcomes(probs_b, shots, rng_b);

  CountsHistogram h;
  h.width = layout.merged_width;
  for (std::uint64_t s = 0; s < shots; ++s) {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < layout.measured_bits_a.size(); ++k)
      bits |= ((outcomes_a[s] >> k) & 1u) << layout.measured_bits_a[k];
    for (std::size_t k = 0; k < layout.measured_bits_b.size(); ++k)
      bits |= ((outcomes_b[s] >> k) & 1u) << layout.measured_bits_b[k];
    h.add(bits);
  }
  return h;
}

}  // namespace quench
