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

#include "quench/counts.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace quench {

std::uint64_t CountsHistogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [bits, n] : counts) t += n;
  return t;
}

void CountsHistogram::add(std::uint64_t bits, std::uint64_t n) {
  counts[bits] += n;
}

std::string CountsHistogram::bitstring(std::uint64_t bits, int width) {
  std::string s(width, '0');
  for (int i = 0; i < width; ++i)
    if ((bits >> i) & 1u) s[width - 1 - i] = '1';
  return s;
}

void CountsHistogram::serialize(std::ostream& os) const {
  for (const auto& [bits, n] : counts)
    os << bitstring(bits, width) << ' ' << n << '\n';
  os << "# total " << total() << '\n';
}

CountsHistogram CountsHistogram::deserialize(std::istream& is) {
  CountsHistogram h;
  std::string line;
  bool saw_trailer = false;
  std::uint64_t declared = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string word;
      ls >> word;
      if (word == "total") {
        ls >> declared;
        saw_trailer = true;
      }
      continue;
    }
    std::istringstream ls(line);
    std::string bits;
    std::uint64_t n = 0;
    if (!(ls >> bits >> n))
      throw std::runtime_error("counts record malformed: " + line);
    if (h.width == 0) h.width = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != h.width)
      throw std::runtime_error("counts record width mismatch: " + line);
    std::uint64_t key = 0;
    for (int i = 0; i < h.width; ++i) {
      const char c = bits[h.width - 1 - i];
      if (c == '1')
        key |= (std::uint64_t{1} << i);
      else if (c != '0')
        throw std::runtime_error("counts record has non-binary character: " + line);
    }
    h.add(key, n);
  }
  if (saw_trailer && declared != h.total())
    throw std::runtime_error("counts trailer total does not match records");
  return h;
}

CountsHistogram merge_counts(const CountsHistogram& a, const CountsHistogram& b) {
  if (a.width != b.width)
    throw std::invalid_argument("cannot merge histograms of different widths");
  CountsHistogram out = a;
  for (const auto& [bits, n] : b.counts) out.add(bits, n);
  return out;
}

}  // namespace quench
