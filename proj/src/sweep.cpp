#include "archprobe/sweep.hpp"

#include "archprobe/grid.hpp"
#include "archprobe/network.hpp"
#include "archprobe/parallel.hpp"
#include "archprobe/rng.hpp"
#include "archprobe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace archprobe {

std::vector<double> default_scale_grid() {
  std::vector<double> scales(10);
  const double lo = std::log(0.5), hi = std::log(6.0);
  for (int i = 0; i < 10; ++i)
    scales[static_cast<std::size_t>(i)] =
        std::exp(lo + (hi - lo) * static_cast<double>(i) / 9.0);
  return scales;
}

std::vector<int> default_depth_grid() { return {1, 2, 3, 4, 5, 6}; }

namespace {

double measure_sample(const FunctionSample& sample, Measure m,
                      const SweepSpec& spec) {
  switch (m) {
    case Measure::Fourier:
      return fourier_complexity(sample, spec.window).score.raw;
    case Measure::Chebyshev:
      return poly_complexity(sample, PolyBasis::Chebyshev).score.raw;
    case Measure::Legendre:
      return poly_complexity(sample, PolyBasis::Legendre).score.raw;
    case Measure::LZ:
      return lz_complexity(sample.values, spec.lz_levels).raw;
  }
  throw std::logic_error("measure_sample: unknown measure");
}

}  // namespace

HeatmapSweepResult run_heatmap_sweep(const SweepSpec& spec, int jobs) {
  if (spec.depths.empty() || spec.scales.empty())
    throw std::invalid_argument("run_heatmap_sweep: empty axis");
  if (spec.seeds_per_cell < 1)
    throw std::invalid_argument("run_heatmap_sweep: seeds_per_cell < 1");
  if (spec.measures.empty())
    throw std::invalid_argument("run_heatmap_sweep: no measures");
  if (spec.base.input_dim != 2)
    throw std::invalid_argument(
        "run_heatmap_sweep: heatmaps need 2D input architectures");

  HeatmapSweepResult result;
  result.spec = spec;
  const std::size_t n_depths = spec.depths.size();
  const std::size_t n_scales = spec.scales.size();
  const auto n_seeds = static_cast<std::size_t>(spec.seeds_per_cell);
  const std::size_t n_measures = spec.measures.size();
  const std::size_t n_tasks = n_scales * n_depths * n_seeds;
  result.rows.resize(n_tasks * n_measures);

  parallel_for(n_tasks, jobs, [&](std::size_t task) {
    const std::size_t si = task / (n_depths * n_seeds);
    const std::size_t di = (task / n_seeds) % n_depths;
    const std::size_t k = task % n_seeds;

    ArchSpec arch = spec.base;
    arch.depth = spec.depths[di];
    arch.weight_scale = spec.scales[si];
    validate(arch);
    const std::uint64_t net_seed =
        derive_seed(spec.seed, si * n_depths * n_seeds + di * n_seeds + k);

    bool finite = true;
    std::vector<double> raw(n_measures,
                            std::numeric_limits<double>::quiet_NaN());
    try {
      const Network net = init_network(arch, net_seed);
      const FunctionSample sample = sample_grid(net, GridSpec{2, spec.grid_m});
      for (std::size_t mi = 0; mi < n_measures; ++mi)
        raw[mi] = measure_sample(sample, spec.measures[mi], spec);
      for (const double v : raw)
        if (!std::isfinite(v)) finite = false;
    } catch (const std::runtime_error&) {
      finite = false;  // non-finite forward pass; recorded, not dropped
    }

    for (std::size_t mi = 0; mi < n_measures; ++mi) {
      SweepRow& row = result.rows[task * n_measures + mi];
      row.scale_index = static_cast<int>(si);
      row.depth_index = static_cast<int>(di);
      row.seed_index = static_cast<int>(k);
      row.measure = spec.measures[mi];
      row.arch_id = describe(arch);
      row.raw = raw[mi];
      row.normalized = 0.0;
      row.finite = finite && std::isfinite(raw[mi]);
    }
  });

  for (std::size_t task = 0; task < n_tasks; ++task)
    if (!result.rows[task * n_measures].finite) ++result.nonfinite_count;
  return result;
}

void normalize_sweeps(const std::vector<HeatmapSweepResult*>& sweeps) {
  for (const Measure m : {Measure::Fourier, Measure::Chebyshev,
                          Measure::Legendre, Measure::LZ}) {
    double lo = 0.0, hi = 0.0;
    bool seen = false;
    for (const HeatmapSweepResult* sweep : sweeps) {
      for (const SweepRow& row : sweep->rows) {
        if (row.measure != m || !row.finite) continue;
        if (!seen) {
          lo = hi = row.raw;
          seen = true;
        } else {
          lo = std::min(lo, row.raw);
          hi = std::max(hi, row.raw);
        }
      }
    }
    if (!seen) continue;
    for (HeatmapSweepResult* sweep : sweeps)
      for (SweepRow& row : sweep->rows)
        if (row.measure == m && row.finite)
          row.normalized = hi > lo ? (row.raw - lo) / (hi - lo) : 0.0;
  }
}

namespace {

Eigen::MatrixXd cell_grid(const HeatmapSweepResult& result, Measure m,
                          bool normalized, bool want_std) {
  const auto n_scales = static_cast<Eigen::Index>(result.spec.scales.size());
  const auto n_depths = static_cast<Eigen::Index>(result.spec.depths.size());
  Eigen::MatrixXd grid(n_scales, n_depths);
  for (Eigen::Index si = 0; si < n_scales; ++si) {
    for (Eigen::Index di = 0; di < n_depths; ++di) {
      std::vector<double> vals;
      for (const SweepRow& row : result.rows) {
        if (row.measure != m || !row.finite) continue;
        if (row.scale_index != si || row.depth_index != di) continue;
        vals.push_back(normalized ? row.normalized : row.raw);
      }
      if (vals.empty())
        grid(si, di) = std::numeric_limits<double>::quiet_NaN();
      else
        grid(si, di) = want_std ? sample_std(vals) : mean(vals);
    }
  }
  return grid;
}

}  // namespace

Eigen::MatrixXd cell_mean_grid(const HeatmapSweepResult& result, Measure m,
                               bool normalized) {
  return cell_grid(result, m, normalized, /*want_std=*/false);
}

Eigen::MatrixXd cell_std_grid(const HeatmapSweepResult& result, Measure m,
                              bool normalized) {
  return cell_grid(result, m, normalized, /*want_std=*/true);
}

CorrelationStudyResult run_correlation_study(int n_archs, std::uint64_t seed,
                                             int jobs) {
  if (n_archs < 3)
    throw std::invalid_argument("run_correlation_study: need >= 3 archs");

  static constexpr ActivationKind kPool[] = {
      ActivationKind::ReLU,  ActivationKind::GELU,     ActivationKind::Swish,
      ActivationKind::SELU,  ActivationKind::TanH,     ActivationKind::Gaussian,
      ActivationKind::Sine};
  constexpr std::size_t kFamilies = std::size(kPool) + 1;

  CorrelationStudyResult result;
  result.rows.resize(static_cast<std::size_t>(n_archs));
  parallel_for(static_cast<std::size_t>(n_archs), jobs, [&](std::size_t i) {
    Rng rng = Rng::stream(seed, i, StreamRole::Data);
    ArchSpec arch;
    const std::size_t family = i % kFamilies;
    if (family == std::size(kPool)) {
      arch.unbiased = true;
      arch.depth = 1;
    } else {
      arch.activation = kPool[family];
      arch.depth = 1 + static_cast<int>(rng.below(6));
    }
    arch.weight_scale = std::exp(rng.uniform(std::log(1.0), std::log(6.0)));
    validate(arch);

    CorrelationRow& row = result.rows[i];
    row.arch_id = describe(arch);
    row.net_seed = derive_seed(seed, i);
    for (int k = 0; k < kCorrelationSeedsPerArch; ++k) {
      const Network net = init_network(
          arch, derive_seed(row.net_seed, static_cast<std::uint64_t>(k)));
      const FunctionSample sample = sample_grid(net, GridSpec{2, 64});
      row.fourier += fourier_complexity(sample, Window::Hann).score.raw;
      row.chebyshev += poly_complexity(sample, PolyBasis::Chebyshev).score.raw;
      row.legendre += poly_complexity(sample, PolyBasis::Legendre).score.raw;
      row.lz += lz_complexity(sample.values).raw;
    }
    row.fourier /= kCorrelationSeedsPerArch;
    row.chebyshev /= kCorrelationSeedsPerArch;
    row.legendre /= kCorrelationSeedsPerArch;
    row.lz /= kCorrelationSeedsPerArch;
  });

  std::vector<double> f, c, z;
  f.reserve(result.rows.size());
  c.reserve(result.rows.size());
  z.reserve(result.rows.size());
  for (const CorrelationRow& row : result.rows) {
    f.push_back(row.fourier);
    c.push_back(row.chebyshev);
    z.push_back(row.lz);
  }
  try {
    result.rho_fourier_lz = spearman(f, z);
    result.rho_fourier_chebyshev = spearman(f, c);
    result.rho_chebyshev_lz = spearman(c, z);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(
        "run_correlation_study: degenerate pool (a measure is constant)");
  }
  return result;
}

}  // namespace archprobe
