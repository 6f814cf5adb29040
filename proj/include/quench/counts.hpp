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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace quench {

/// Histogram of measured bitstrings. Keys are basis indices over the measured
/// bits (bit i of the key is the i-th measured qubit). The ordered map keeps
/// serialization deterministic.
struct CountsHistogram {
  int width = 0;
  std::map<std::uint64_t, std::uint64_t> counts;

  std::uint64_t total() const;
  void add(std::uint64_t bits, std::uint64_t n = 1);

  /// Fixed-width rendering, qubit 0 rightmost.
  static std::string bitstring(std::uint64_t bits, int width);

  /// One `<bitstring> <count>` record per line plus a `# total <shots>`
  /// trailer.
  void serialize(std::ostream& os) const;
  static CountsHistogram deserialize(std::istream& is);
};

/// Merge b into a (widths must match).
CountsHistogram merge_counts(const CountsHistogram& a, const CountsHistogram& b);

}  // namespace quench
