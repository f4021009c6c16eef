#include "archprobe/complexity.hpp"

#include <algorithm>

namespace archprobe {

void normalize_scores(std::vector<ComplexityScore>& batch) {
  // Min-max per measure within this batch only. Scores are not comparable
  // across batches normalized separately.
  for (const Measure measure :
       {Measure::Fourier, Measure::Chebyshev, Measure::Legendre, Measure::LZ}) {
    double lo = 0.0, hi = 0.0;
    bool seen = false;
    for (const auto& s : batch) {
      if (s.measure != measure) continue;
      if (!seen) {
        lo = hi = s.raw;
        seen = true;
      } else {
        lo = std::min(lo, s.raw);
        hi = std::max(hi, s.raw);
      }
    }
    if (!seen) continue;
    for (auto& s : batch) {
      if (s.measure != measure) continue;
      s.normalized = hi > lo ? (s.raw - lo) / (hi - lo) : 0.0;
    }
  }
}

}  // namespace archprobe
