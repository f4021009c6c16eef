#pragma once

#include "archprobe/archspec.hpp"
#include "archprobe/complexity.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace archprobe {

// 10 scales log-spaced over [0.5, 6]; the exact grid is recorded in output
// metadata since it is a toolkit choice.
std::vector<double> default_scale_grid();
std::vector<int> default_depth_grid();  // 1..6

struct SweepSpec {
  ArchSpec base;  // depth and weight_scale are overridden per cell
  std::vector<int> depths = default_depth_grid();
  std::vector<double> scales = default_scale_grid();
  int seeds_per_cell = 20;
  std::vector<Measure> measures = {Measure::Fourier, Measure::Chebyshev,
                                   Measure::Legendre, Measure::LZ};
  int grid_m = 64;
  Window window = Window::Hann;  // Fourier flavor, recorded in metadata
  int lz_levels = 10;
  std::uint64_t seed = 0;
};

struct SweepRow {
  int scale_index = 0;
  int depth_index = 0;
  int seed_index = 0;
  Measure measure = Measure::Fourier;
  std::string arch_id;
  double raw = 0.0;
  double normalized = 0.0;
  bool finite = true;
};

struct HeatmapSweepResult {
  SweepSpec spec;
  // Fixed order: scale-major, then depth, then seed, then measure; one row
  // per (cell, seed, measure) even when the sample was non-finite.
  std::vector<SweepRow> rows;
  int nonfinite_count = 0;  // non-finite samples, excluded from every mean
};

// One full cross product. Every cell gets the identical seed list; network
// seeds derive from (spec.seed, cell, seed index), so results are
// reproducible cell by cell and byte-identical for any jobs value.
HeatmapSweepResult run_heatmap_sweep(const SweepSpec& spec, int jobs = 1);

// Min-max over the finite rows of all given sweeps jointly, per measure.
// Scores from sweeps normalized in different pools are not comparable.
void normalize_sweeps(const std::vector<HeatmapSweepResult*>& sweeps);

// scales x depths grids over finite rows of one measure; NaN for cells with
// no finite samples. `normalized` selects which score the cells aggregate.
Eigen::MatrixXd cell_mean_grid(const HeatmapSweepResult& result, Measure m,
                               bool normalized = true);
Eigen::MatrixXd cell_std_grid(const HeatmapSweepResult& result, Measure m,
                              bool normalized = true);

// ---- cross-measure correlation study ----

// Replicate networks averaged into each architecture's scores. LZ sits on a
// noisy floor (~40% of its range) for near-constant nets, so per-net scores
// rank-scramble the low-complexity half of the pool; means over this many
// init seeds keep every measure pair above 0.8 with margin.
inline constexpr int kCorrelationSeedsPerArch = 20;

// One architecture of the pool; scores are means over the replicate
// networks, net_seed is the base the replicate seeds derive from.
struct CorrelationRow {
  std::string arch_id;
  std::uint64_t net_seed = 0;
  double fourier = 0.0;
  double chebyshev = 0.0;
  double legendre = 0.0;
  double lz = 0.0;
};

struct CorrelationStudyResult {
  std::vector<CorrelationRow> rows;
  double rho_fourier_lz = 0.0;
  double rho_fourier_chebyshev = 0.0;
  double rho_chebyshev_lz = 0.0;
};

// Pool stratified over eight families (seven activations plus the unbiased
// spectral model), depth 1-6, log-uniform scale in [1, 6] (width 64,
// prefactor 1). Scales start at the default init magnitude rather than
// below it: sub-default MLPs collapse toward constants where LZ only
// reports bin noise. Scores per architecture are means over
// kCorrelationSeedsPerArch replicate networks, all four measures on a
// shared grid sample. Throws on degenerate (constant-measure) pools.
CorrelationStudyResult run_correlation_study(int n_archs, std::uint64_t seed,
                                             int jobs = 1);

}  // namespace archprobe
