#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "archprobe/complexity.hpp"

namespace archprobe {

std::vector<int> discretize(const std::vector<double>& values, int levels) {
  if (levels < 2) throw std::invalid_argument("levels must be at least 2");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<int> bins(values.size(), 0);
  if (hi <= lo) return bins;
  const double scale = static_cast<double>(levels) / (hi - lo);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int b = static_cast<int>((values[i] - lo) * scale);
    bins[i] = std::min(b, levels - 1);  // v == max falls into the last bin
  }
  return bins;
}

int lz78_dictionary_size(const std::vector<int>& symbols) {
  // Trie walk: extend the current phrase while it stays in the dictionary,
  // insert on the first miss and restart. Node 0 is the root; inserted
  // phrases get ids 1..count. Trailing in-dictionary fragments are uncounted.
  std::unordered_map<std::uint64_t, int> edges;
  edges.reserve(symbols.size());
  int count = 0;
  int node = 0;
  for (const int s : symbols) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(node)) << 32) |
        static_cast<std::uint32_t>(s);
    const auto it = edges.find(key);
    if (it != edges.end()) {
      node = it->second;
    } else {
      edges.emplace(key, ++count);
      node = 0;
    }
  }
  return count;
}

ComplexityScore lz_complexity(const std::vector<double>& values, int levels,
                              bool traversal_mode) {
  if (values.size() < 2)
    throw std::invalid_argument("lz_complexity requires at least 2 values");
  const std::vector<int> bins = discretize(values, levels);
  std::vector<int> symbols;
  if (traversal_mode) {
    symbols.resize(bins.size() - 1);
    for (std::size_t i = 0; i + 1 < bins.size(); ++i)
      symbols[i] = bins[i + 1] - bins[i];
  } else {
    symbols = bins;
  }
  ComplexityScore score;
  score.measure = Measure::LZ;
  score.raw = static_cast<double>(lz78_dictionary_size(symbols));
  score.grid_m = static_cast<int>(values.size());
  score.levels = levels;
  return score;
}

}  // namespace archprobe
