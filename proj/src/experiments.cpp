#include "archprobe/experiments.hpp"

#include "archprobe/complexity.hpp"
#include "archprobe/csv.hpp"
#include "archprobe/grid.hpp"
#include "archprobe/network.hpp"
#include "archprobe/parallel.hpp"
#include "archprobe/pgm.hpp"
#include "archprobe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace archprobe {

namespace {

namespace fs = std::filesystem;

std::string out_path(const StudyOptions& opt, const std::string& name) {
  fs::create_directories(opt.out_dir);
  return (fs::path(opt.out_dir) / name).string();
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Regression accuracy with predictions clamped to the label range [0,1];
// raw MLP outputs can overshoot and the metric should not reward that.
double clamped_accuracy(const Eigen::VectorXd& pred, const Eigen::VectorXd& y) {
  std::vector<double> p(static_cast<std::size_t>(pred.size()));
  for (Eigen::Index i = 0; i < pred.size(); ++i)
    p[static_cast<std::size_t>(i)] = std::clamp(pred[i], 0.0, 1.0);
  return metric_regression_accuracy(p, to_std(y));
}

}  // namespace

ArchSpec variant_spec(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("variant_spec: empty name");
  if (name.find('-') != std::string::npos) return parse_spec(name);

  const std::vector<std::string> parts = split(name, '+');
  ArchSpec spec;
  if (parts[0] == "unbiased") {
    if (parts.size() > 1)
      throw std::invalid_argument(
          "variant_spec: the unbiased family takes no component suffixes: '" +
          name + "'");
    spec.unbiased = true;
    spec.depth = 1;
    validate(spec);
    return spec;
  }
  const auto act = parse_activation(parts[0]);
  if (!act)
    throw std::invalid_argument("variant_spec: unknown activation '" +
                                parts[0] + "' in '" + name + "'");
  spec.activation = *act;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i] == "res")
      spec.residual = true;
    else if (parts[i] == "ln")
      spec.layernorm = true;
    else if (parts[i] == "gate")
      spec.gating = true;
    else
      throw std::invalid_argument("variant_spec: unknown component '" +
                                  parts[i] + "' in '" + name + "'");
  }
  validate(spec);
  return spec;
}

// ---- heatmap sweeps ----

SweepStudyResult experiment_sweep(const SweepStudyConfig& cfg,
                                  const StudyOptions& opt) {
  if (cfg.variants.empty())
    throw std::invalid_argument("experiment_sweep: no variants");
  if (cfg.depths.empty() || cfg.scales.empty())
    throw std::invalid_argument("experiment_sweep: empty axis");

  SweepStudyResult result;
  result.variants = cfg.variants;
  result.sweeps.reserve(cfg.variants.size());
  for (const std::string& v : cfg.variants) {
    SweepSpec spec;
    spec.base = variant_spec(v);
    // The unbiased family is single-layer by construction, so it carries no
    // depth axis; its rows still join the shared normalization pool.
    spec.depths = spec.base.unbiased ? std::vector<int>{1} : cfg.depths;
    spec.scales = cfg.scales;
    spec.seeds_per_cell = cfg.seeds_per_cell;
    spec.grid_m = cfg.grid_m;
    spec.seed = opt.seed;
    result.sweeps.push_back(run_heatmap_sweep(spec, opt.jobs));
  }

  std::vector<HeatmapSweepResult*> pool;
  pool.reserve(result.sweeps.size());
  for (HeatmapSweepResult& s : result.sweeps) pool.push_back(&s);
  normalize_sweeps(pool);

  CsvTable rows({"variant", "arch_id", "depth", "weight_scale", "seed_index",
                 "measure", "raw", "normalized", "finite"});
  for (std::size_t vi = 0; vi < result.sweeps.size(); ++vi) {
    const HeatmapSweepResult& sweep = result.sweeps[vi];
    for (const SweepRow& row : sweep.rows) {
      rows.add_row({cfg.variants[vi], row.arch_id,
                    std::to_string(sweep.spec.depths[row.depth_index]),
                    format_double(sweep.spec.scales[row.scale_index]),
                    std::to_string(row.seed_index), measure_name(row.measure),
                    format_double(row.raw), format_double(row.normalized),
                    row.finite ? "1" : "0"});
    }
  }
  write_text_file(out_path(opt, "sweep_rows.csv"), rows.serialize());

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("fourier_window", "hann");
  meta.emplace_back("grid_m", std::to_string(cfg.grid_m));
  meta.emplace_back("seeds_per_cell", std::to_string(cfg.seeds_per_cell));
  meta.emplace_back("seed", std::to_string(opt.seed));
  meta.emplace_back("variants", join(cfg.variants, ","));
  {
    std::vector<std::string> ds, ss;
    for (int d : cfg.depths) ds.push_back(std::to_string(d));
    for (double s : cfg.scales) ss.push_back(format_double(s));
    meta.emplace_back("depths", join(ds, ","));
    meta.emplace_back("scales", join(ss, ","));
  }
  int nonfinite_total = 0;
  for (std::size_t vi = 0; vi < result.sweeps.size(); ++vi) {
    nonfinite_total += result.sweeps[vi].nonfinite_count;
    meta.emplace_back("nonfinite_" + cfg.variants[vi],
                      std::to_string(result.sweeps[vi].nonfinite_count));
  }
  meta.emplace_back("nonfinite_total", std::to_string(nonfinite_total));
  write_meta_file(out_path(opt, "sweep_rows.meta"), meta);

  for (std::size_t vi = 0; vi < result.sweeps.size(); ++vi) {
    const HeatmapSweepResult& sweep = result.sweeps[vi];
    for (Measure m : sweep.spec.measures) {
      const Eigen::MatrixXd mean = cell_mean_grid(sweep, m);
      const Eigen::MatrixXd sd = cell_std_grid(sweep, m);
      std::vector<std::string> header = {"weight_scale"};
      for (int d : sweep.spec.depths) header.push_back("d" + std::to_string(d));
      CsvTable mean_csv(header), sd_csv(header);
      for (Eigen::Index si = 0; si < mean.rows(); ++si) {
        std::vector<std::string> mrow = {
            format_double(sweep.spec.scales[static_cast<std::size_t>(si)])};
        std::vector<std::string> srow = mrow;
        for (Eigen::Index di = 0; di < mean.cols(); ++di) {
          mrow.push_back(format_double(mean(si, di)));
          srow.push_back(format_double(sd(si, di)));
        }
        mean_csv.add_row(std::move(mrow));
        sd_csv.add_row(std::move(srow));
      }
      const std::string stem =
          "heatmap_" + cfg.variants[vi] + "_" + measure_name(m);
      write_text_file(out_path(opt, stem + ".csv"), mean_csv.serialize());
      write_text_file(out_path(opt, stem + "_std.csv"), sd_csv.serialize());
      write_bytes(out_path(opt, stem + ".pgm"), render_pgm_matrix(mean));
    }
  }

  if (cfg.function_maps) {
    for (std::size_t vi = 0; vi < result.sweeps.size(); ++vi) {
      const SweepSpec& spec = result.sweeps[vi].spec;
      const int n_depths = static_cast<int>(spec.depths.size());
      const int n_seeds = spec.seeds_per_cell;
      for (std::size_t si = 0; si < spec.scales.size(); ++si) {
        for (std::size_t di = 0; di < spec.depths.size(); ++di) {
          if ((si + di) % 2 != 0) continue;  // every other cell
          ArchSpec arch = spec.base;
          if (!arch.unbiased) arch.depth = spec.depths[di];
          arch.weight_scale = spec.scales[si];
          // Matches the sweep's per-cell derivation at seed index 0, so the
          // map shows the network behind the first CSV row of the cell.
          const std::uint64_t net_seed = derive_seed(
              spec.seed, (si * static_cast<std::size_t>(n_depths) + di) *
                             static_cast<std::size_t>(n_seeds));
          const Network net = init_network(arch, net_seed);
          const FunctionSample sample =
              sample_grid(net, GridSpec{2, spec.grid_m}, opt.jobs);
          const std::string name = "funcmap_" + cfg.variants[vi] + "_d" +
                                   std::to_string(spec.depths[di]) + "_s" +
                                   format_scale(spec.scales[si]) + ".pgm";
          write_bytes(out_path(opt, name), render_pgm(sample));
        }
      }
    }
  }
  return result;
}

// ---- cross-measure correlation ----

CorrelationStudyResult experiment_correlate(const CorrelateStudyConfig& cfg,
                                            const StudyOptions& opt) {
  CorrelationStudyResult res =
      run_correlation_study(cfg.n_archs, opt.seed, opt.jobs);

  CsvTable scatter(
      {"arch_id", "net_seed", "fourier", "chebyshev", "legendre", "lz"});
  for (const CorrelationRow& row : res.rows) {
    scatter.add_row({row.arch_id, std::to_string(row.net_seed),
                     format_double(row.fourier), format_double(row.chebyshev),
                     format_double(row.legendre), format_double(row.lz)});
  }
  write_text_file(out_path(opt, "correlation_scatter.csv"),
                  scatter.serialize());

  CsvTable summary({"pair", "spearman_rho"});
  summary.add_row({"fourier_lz", format_double(res.rho_fourier_lz)});
  summary.add_row(
      {"fourier_chebyshev", format_double(res.rho_fourier_chebyshev)});
  summary.add_row({"chebyshev_lz", format_double(res.rho_chebyshev_lz)});
  write_text_file(out_path(opt, "correlation_summary.csv"),
                  summary.serialize());

  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("fourier_window", "hann");
  meta.emplace_back("n_archs", std::to_string(cfg.n_archs));
  meta.emplace_back("seeds_per_arch",
                    std::to_string(kCorrelationSeedsPerArch));
  meta.emplace_back("scale_range", "1.0,6.0");
  meta.emplace_back("seed", std::to_string(opt.seed));
  write_meta_file(out_path(opt, "correlation_scatter.meta"), meta);
  return res;
}

// ---- modulo study ----

ModuloStudyResult run_modulo_study(const ModuloStudyConfig& cfg,
                                   const StudyOptions& opt) {
  if (cfg.Ms.empty() || cfg.activations.empty() || cfg.prefactors.empty())
    throw std::invalid_argument("run_modulo_study: empty axis");
  if (cfg.seeds < 1 || cfg.iterations < 1)
    throw std::invalid_argument("run_modulo_study: seeds and iterations must "
                                "be positive");

  // One fixed split per M, shared by every (activation, prefactor, seed)
  // cell, so accuracy differences are attributable to the architecture.
  std::vector<ModuloData> data;
  data.reserve(cfg.Ms.size());
  for (int M : cfg.Ms) {
    ModuloTask task;
    task.M = M;
    task.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(M));
    data.push_back(gen_modulo(task));
  }

  const std::size_t n_ms = cfg.Ms.size();
  const std::size_t n_acts = cfg.activations.size();
  const std::size_t n_pfs = cfg.prefactors.size();
  const std::size_t n_seeds = static_cast<std::size_t>(cfg.seeds);
  const std::size_t n_runs = n_ms * n_acts * n_pfs * n_seeds;
  const auto flat = [&](std::size_t mi, std::size_t ai, std::size_t pi,
                        std::size_t k) {
    return ((mi * n_acts + ai) * n_pfs + pi) * n_seeds + k;
  };

  ModuloStudyResult result;
  result.runs.resize(n_runs);
  parallel_for(n_runs, opt.jobs, [&](std::size_t i) {
    const std::size_t k = i % n_seeds;
    const std::size_t pi = (i / n_seeds) % n_pfs;
    const std::size_t ai = (i / (n_seeds * n_pfs)) % n_acts;
    const std::size_t mi = i / (n_seeds * n_pfs * n_acts);

    ModuloRun run;
    run.M = cfg.Ms[mi];
    run.activation = cfg.activations[ai];
    run.prefactor = cfg.prefactors[pi];
    run.seed_index = static_cast<int>(k);

    ArchSpec spec;
    spec.input_dim = 2;
    spec.depth = cfg.depth;
    spec.width = cfg.width;
    spec.activation = run.activation;
    spec.prefactor = run.prefactor;
    const std::uint64_t net_seed = derive_seed(opt.seed, 1000000 + i);
    const Network net = init_network(spec, net_seed);
    run.lz_init =
        lz_complexity(sample_grid(net, GridSpec{2, 64}).values).raw;

    TrainConfig tc;
    tc.loss = LossKind::BinaryCrossEntropy;
    tc.learning_rate = cfg.learning_rate;
    tc.iterations = cfg.iterations;
    tc.seed = net_seed;
    const ModuloData& md = data[mi];
    const TrainResult tr = train(net, md.train_X, md.train_y, tc);
    run.final_loss = tr.final_loss;
    run.train_acc = binary_accuracy(forward_batch(tr.net, md.train_X),
                                    md.train_y);
    run.test_acc = binary_accuracy(forward_batch(tr.net, md.test_X),
                                   md.test_y);
    result.runs[i] = run;
  });

  const auto gauss_it = std::find(cfg.activations.begin(),
                                  cfg.activations.end(),
                                  ActivationKind::Gaussian);
  if (gauss_it != cfg.activations.end() && n_pfs >= 3) {
    const std::size_t ai =
        static_cast<std::size_t>(gauss_it - cfg.activations.begin());
    for (std::size_t mi = 0; mi < n_ms; ++mi) {
      std::vector<double> acc_means(n_pfs, 0.0);
      for (std::size_t pi = 0; pi < n_pfs; ++pi) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n_seeds; ++k)
          sum += result.runs[flat(mi, ai, pi, k)].test_acc;
        acc_means[pi] = sum / static_cast<double>(n_seeds);
      }
      ModuloFit fit;
      fit.M = cfg.Ms[mi];
      fit.fit = quadratic_fit(cfg.prefactors, acc_means);
      result.gaussian_fits.push_back(fit);
    }
  }

  CsvTable runs_csv({"M", "activation", "prefactor", "seed_index", "lz_init",
                     "train_acc", "test_acc", "final_loss"});
  for (const ModuloRun& r : result.runs) {
    runs_csv.add_row({std::to_string(r.M), activation_name(r.activation),
                      format_double(r.prefactor),
                      std::to_string(r.seed_index), format_double(r.lz_init),
                      format_double(r.train_acc), format_double(r.test_acc),
                      format_double(r.final_loss)});
  }
  write_text_file(out_path(opt, "modulo_runs.csv"), runs_csv.serialize());

  CsvTable fits_csv({"M", "a", "b", "c", "peak_prefactor"});
  for (const ModuloFit& f : result.gaussian_fits) {
    fits_csv.add_row({std::to_string(f.M), format_double(f.fit.a),
                      format_double(f.fit.b), format_double(f.fit.c),
                      format_double(f.fit.peak)});
  }
  write_text_file(out_path(opt, "modulo_fits.csv"), fits_csv.serialize());

  write_meta_file(
      out_path(opt, "modulo_runs.meta"),
      {{"width", std::to_string(cfg.width)},
       {"depth", std::to_string(cfg.depth)},
       {"iterations", std::to_string(cfg.iterations)},
       {"learning_rate", format_double(cfg.learning_rate)},
       {"alphabet_N", "16"},
       {"train_fraction", "0.5"},
       {"seed", std::to_string(opt.seed)}});
  return result;
}

// ---- Colored-MNIST study ----

namespace {

MnistRaw subsample_mnist(const MnistRaw& raw, int count, std::uint64_t seed,
                         std::uint64_t stream_index) {
  const std::size_t n = raw.images.size();
  if (n <= static_cast<std::size_t>(count)) return raw;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng = Rng::stream(seed, stream_index, StreamRole::Shuffle);
  for (std::size_t j = 0; j < static_cast<std::size_t>(count); ++j) {
    const std::size_t swap_at = j + rng.below(n - j);
    std::swap(idx[j], idx[swap_at]);
  }
  MnistRaw out;
  out.rows = raw.rows;
  out.cols = raw.cols;
  out.images.reserve(static_cast<std::size_t>(count));
  out.labels.reserve(static_cast<std::size_t>(count));
  for (std::size_t j = 0; j < static_cast<std::size_t>(count); ++j) {
    out.images.push_back(raw.images[idx[j]]);
    out.labels.push_back(raw.labels[idx[j]]);
  }
  return out;
}

}  // namespace

CmnistStudyResult run_cmnist_study(const CmnistStudyConfig& cfg,
                                   const StudyOptions& opt) {
  if (cfg.activations.empty() || cfg.prefactors.empty())
    throw std::invalid_argument("run_cmnist_study: empty axis");
  if (cfg.seeds < 1 || cfg.iterations < 1 || cfg.train_subsample < 1 ||
      cfg.test_count < 1)
    throw std::invalid_argument("run_cmnist_study: counts must be positive");

  MnistRaw train_raw, test_raw;
  std::string corpus;
  if (cfg.mnist_dir.empty()) {
    corpus = "synthetic";
    train_raw = synthetic_mnist(cfg.train_subsample, derive_seed(opt.seed, 11));
    test_raw = synthetic_mnist(cfg.test_count, derive_seed(opt.seed, 12));
  } else {
    corpus = "idx";
    const fs::path dir(cfg.mnist_dir);
    const MnistRaw full_train =
        load_mnist_idx((dir / "train-images-idx3-ubyte").string(),
                       (dir / "train-labels-idx1-ubyte").string());
    const MnistRaw full_test =
        load_mnist_idx((dir / "t10k-images-idx3-ubyte").string(),
                       (dir / "t10k-labels-idx1-ubyte").string());
    train_raw = subsample_mnist(full_train, cfg.train_subsample, opt.seed, 13);
    test_raw = subsample_mnist(full_test, cfg.test_count, opt.seed, 14);
  }

  const ColoredMnistSet train_set = build_colored_mnist(
      train_raw, CmnistVariant::Train, derive_seed(opt.seed, 21));
  const ColoredMnistSet test_digit = build_colored_mnist(
      test_raw, CmnistVariant::TestDigitCorrelated, derive_seed(opt.seed, 22));
  const ColoredMnistSet test_color = build_colored_mnist(
      test_raw, CmnistVariant::TestColorCorrelated, derive_seed(opt.seed, 23));
  const int input_dim = static_cast<int>(train_set.X.cols());

  const std::size_t n_acts = cfg.activations.size();
  const std::size_t n_pfs = cfg.prefactors.size();
  const std::size_t n_seeds = static_cast<std::size_t>(cfg.seeds);
  const std::size_t n_runs = n_acts * n_pfs * n_seeds;

  CmnistStudyResult result;
  result.runs.resize(n_runs);
  parallel_for(n_runs, opt.jobs, [&](std::size_t i) {
    const std::size_t k = i % n_seeds;
    const std::size_t pi = (i / n_seeds) % n_pfs;
    const std::size_t ai = i / (n_seeds * n_pfs);

    CmnistRun run;
    run.activation = cfg.activations[ai];
    run.prefactor = cfg.prefactors[pi];
    run.seed_index = static_cast<int>(k);

    ArchSpec spec;
    spec.input_dim = input_dim;
    spec.depth = cfg.depth;
    spec.width = cfg.width;
    spec.activation = run.activation;
    spec.prefactor = run.prefactor;
    const std::uint64_t net_seed = derive_seed(opt.seed, 2000000 + i);
    const Network net = init_network(spec, net_seed);
    // Shared traversal seed: every cell is probed along the same random
    // corner walk, so init complexities are directly comparable.
    run.lz_init = lz_complexity(
                      sample_traversals(net, input_dim, 64,
                                        derive_seed(opt.seed, 31)).values,
                      10, /*traversal_mode=*/true)
                      .raw;

    TrainConfig tc;
    tc.loss = LossKind::MSE;
    tc.learning_rate = cfg.learning_rate;
    tc.iterations = cfg.iterations;
    tc.seed = net_seed;
    const TrainResult tr = train(net, train_set.X, train_set.y, tc);
    run.final_loss = tr.final_loss;
    run.color_acc =
        clamped_accuracy(forward_batch(tr.net, test_color.X), test_color.y);
    run.digit_acc =
        clamped_accuracy(forward_batch(tr.net, test_digit.X), test_digit.y);
    result.runs[i] = run;
  });

  CsvTable runs_csv({"activation", "prefactor", "seed_index", "lz_init",
                     "final_loss", "color_acc", "digit_acc"});
  for (const CmnistRun& r : result.runs) {
    runs_csv.add_row({activation_name(r.activation), format_double(r.prefactor),
                      std::to_string(r.seed_index), format_double(r.lz_init),
                      format_double(r.final_loss), format_double(r.color_acc),
                      format_double(r.digit_acc)});
  }
  write_text_file(out_path(opt, "cmnist_runs.csv"), runs_csv.serialize());
  write_meta_file(
      out_path(opt, "cmnist_runs.meta"),
      {{"corpus", corpus},
       {"train_subsample", std::to_string(cfg.train_subsample)},
       {"test_count", std::to_string(cfg.test_count)},
       {"width", std::to_string(cfg.width)},
       {"depth", std::to_string(cfg.depth)},
       {"iterations", std::to_string(cfg.iterations)},
       {"learning_rate", format_double(cfg.learning_rate)},
       {"corruption", format_double(kCmnistCorruption)},
       {"seed", std::to_string(opt.seed)}});
  return result;
}

// ---- coordinate-MLP study ----

namespace {

std::string target_label(const std::string& target) {
  std::string label = target;
  if (label != "shapes" && label != "waves")
    label = fs::path(target).stem().string();
  for (char& c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  if (label.empty()) label = "target";
  return label;
}

CoordinateImageTask resolve_target(const std::string& target, int m,
                                   std::uint64_t seed) {
  if (target == "waves") return gen_waves(2.0, m);
  if (target == "shapes") return gen_shapes(m, seed);
  const FunctionSample img = read_pgm(target);
  if (img.grid.m != m)
    throw std::invalid_argument("run_coordinate_study: target '" + target +
                                "' is " + std::to_string(img.grid.m) +
                                "px per side, expected " + std::to_string(m));
  return task_from_image(img.values, m, 0.4, seed);
}

}  // namespace

CoordinateStudyResult run_coordinate_study(const CoordinateStudyConfig& cfg,
                                           const StudyOptions& opt) {
  if (cfg.targets.empty() || cfg.activations.empty() || cfg.scales.empty())
    throw std::invalid_argument("run_coordinate_study: empty axis");
  if (cfg.iterations < 1 || cfg.untrained_reference_seeds < 2)
    throw std::invalid_argument(
        "run_coordinate_study: iterations must be positive and the untrained "
        "reference needs at least 2 seeds");

  std::vector<CoordinateImageTask> tasks;
  tasks.reserve(cfg.targets.size());
  for (const std::string& t : cfg.targets)
    tasks.push_back(resolve_target(t, cfg.m, derive_seed(opt.seed, 41)));

  // Untrained-random reference distribution per (activation, scale): the
  // yardstick the shuffled-weight scores are compared against.
  const std::size_t n_acts = cfg.activations.size();
  const std::size_t n_scales = cfg.scales.size();
  const std::size_t n_refs =
      static_cast<std::size_t>(cfg.untrained_reference_seeds);
  std::vector<double> ref_scores(n_acts * n_scales * n_refs, 0.0);
  parallel_for(ref_scores.size(), opt.jobs, [&](std::size_t i) {
    const std::size_t r = i % n_refs;
    const std::size_t pair = i / n_refs;
    ArchSpec spec;
    spec.input_dim = 2;
    spec.depth = cfg.depth;
    spec.width = cfg.width;
    spec.activation = cfg.activations[pair / n_scales];
    spec.weight_scale = cfg.scales[pair % n_scales];
    const Network net = init_network(
        spec, derive_seed(opt.seed, 3600000 + pair * 1000 + r));
    ref_scores[i] =
        fourier_complexity(sample_grid(net, GridSpec{2, cfg.m}), Window::Hann)
            .score.raw;
  });
  std::vector<double> ref_mean(n_acts * n_scales), ref_std(n_acts * n_scales);
  for (std::size_t pair = 0; pair < n_acts * n_scales; ++pair) {
    const std::vector<double> slice(
        ref_scores.begin() + static_cast<std::ptrdiff_t>(pair * n_refs),
        ref_scores.begin() + static_cast<std::ptrdiff_t>((pair + 1) * n_refs));
    ref_mean[pair] = mean(slice);
    ref_std[pair] = sample_std(slice);
  }

  struct RunArtifacts {
    CoordinateRun run;
    FunctionSample target_sample, init_sample, trained_sample, shuffled_sample;
    Trajectory trajectory;
  };
  const std::size_t n_runs = cfg.targets.size() * n_acts * n_scales;
  std::vector<RunArtifacts> arts(n_runs);
  parallel_for(n_runs, opt.jobs, [&](std::size_t i) {
    const std::size_t si = i % n_scales;
    const std::size_t ai = (i / n_scales) % n_acts;
    const std::size_t ti = i / (n_scales * n_acts);
    RunArtifacts a;
    a.run.target = cfg.targets[ti];
    a.run.activation = cfg.activations[ai];
    a.run.scale = cfg.scales[si];
    a.run.run_id = target_label(cfg.targets[ti]) + "-" +
                   activation_name(a.run.activation) + "-s" +
                   format_scale(a.run.scale);

    const CoordinateImageTask& task = tasks[ti];
    const GridSpec grid{2, cfg.m};
    a.target_sample =
        FunctionSample{grid, task.target, "target-" + a.run.run_id};

    ArchSpec spec;
    spec.input_dim = 2;
    spec.depth = cfg.depth;
    spec.width = cfg.width;
    spec.activation = a.run.activation;
    spec.weight_scale = a.run.scale;
    const std::uint64_t net_seed = derive_seed(opt.seed, 3000000 + i);
    const Network net = init_network(spec, net_seed);
    a.init_sample = sample_grid(net, grid);
    a.run.fourier_init =
        fourier_complexity(a.init_sample, Window::Hann).score.raw;

    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    coordinate_training_data(task, X, y);
    TrainConfig tc;
    tc.loss = LossKind::MSE;
    tc.learning_rate = cfg.learning_rate;
    tc.iterations = cfg.iterations;
    tc.seed = net_seed;
    tc.trajectory_log_every = cfg.trajectory_log_every;
    tc.probe = TrajectoryProbe::Fourier2D;
    tc.probe_m = cfg.m;
    const TrainResult tr = train(net, X, y, tc);
    a.trajectory = tr.trajectory;
    a.run.final_loss = tr.final_loss;
    a.run.train_acc = clamped_accuracy(forward_batch(tr.net, X), y);

    a.trained_sample = sample_grid(tr.net, grid);
    a.run.fourier_trained =
        fourier_complexity(a.trained_sample, Window::Hann).score.raw;

    const Network shuffled =
        shuffle_within_layers(tr.net, derive_seed(opt.seed, 3500000 + i));
    a.shuffled_sample = sample_grid(shuffled, grid);
    a.run.fourier_shuffled =
        fourier_complexity(a.shuffled_sample, Window::Hann).score.raw;

    const std::size_t pair = ai * n_scales + si;
    a.run.untrained_mean = ref_mean[pair];
    a.run.untrained_std = ref_std[pair];
    arts[i] = std::move(a);
  });

  CoordinateStudyResult result;
  result.runs.reserve(n_runs);
  CsvTable summary({"target", "activation", "weight_scale", "run_id",
                    "fourier_init", "fourier_trained", "fourier_shuffled",
                    "untrained_mean", "untrained_std", "train_acc",
                    "final_loss"});
  for (const RunArtifacts& a : arts) {
    const std::string stem = "inr_" + a.run.run_id;
    write_bytes(out_path(opt, stem + "_target.pgm"),
                render_pgm(a.target_sample));
    write_bytes(out_path(opt, stem + "_init.pgm"), render_pgm(a.init_sample));
    write_bytes(out_path(opt, stem + "_trained.pgm"),
                render_pgm(a.trained_sample));
    write_bytes(out_path(opt, stem + "_shuffled.pgm"),
                render_pgm(a.shuffled_sample));

    CsvTable traj({"iteration", "loss", "mean_abs_weight", "fourier"});
    for (const TrajectoryPoint& p : a.trajectory.points) {
      traj.add_row({std::to_string(p.iteration), format_double(p.loss),
                    format_double(p.mean_abs_weight),
                    format_double(p.complexity)});
    }
    write_text_file(out_path(opt, stem + "_trajectory.csv"), traj.serialize());

    summary.add_row(
        {a.run.target, activation_name(a.run.activation),
         format_double(a.run.scale), a.run.run_id,
         format_double(a.run.fourier_init),
         format_double(a.run.fourier_trained),
         format_double(a.run.fourier_shuffled),
         format_double(a.run.untrained_mean),
         format_double(a.run.untrained_std), format_double(a.run.train_acc),
         format_double(a.run.final_loss)});
    result.runs.push_back(a.run);
  }
  write_text_file(out_path(opt, "inr_summary.csv"), summary.serialize());
  return result;
}

// ---- transformer study ----

TransformerStudyResult run_transformer_study(const TransformerStudyConfig& cfg,
                                             const StudyOptions& opt) {
  TransformerStudyResult result;
  TransformerConfig base = cfg.base;

  if (!cfg.activation_values.empty() && cfg.activation_sequences > 0) {
    base.seed = derive_seed(opt.seed, 51);
    result.activation_cells = sequence_complexity_sweep(
        base, TransformerAxis::Activation, cfg.activation_values,
        cfg.activation_sequences, opt.jobs);
  }
  if (!cfg.gamma_values.empty() && cfg.gamma_sequences > 0) {
    base.seed = derive_seed(opt.seed, 52);
    result.gamma_cells = sequence_complexity_sweep(
        base, TransformerAxis::LnScaling, cfg.gamma_values,
        cfg.gamma_sequences, opt.jobs);
  }
  if (!cfg.depth_values.empty() && cfg.depth_sequences > 0) {
    base.seed = derive_seed(opt.seed, 53);
    result.depth_cells =
        sequence_complexity_sweep(base, TransformerAxis::Depth,
                                  cfg.depth_values, cfg.depth_sequences,
                                  opt.jobs);
  }
  if (cfg.control_sequences > 0) {
    result.control = iid_uniform_control(100, cfg.base.vocab_size,
                                         cfg.control_sequences,
                                         derive_seed(opt.seed, 54));
  }

  CsvTable seqs({"axis", "value", "sequence_index", "lz"});
  CsvTable cells({"axis", "value", "sequences", "mean_lz", "std_lz",
                  "stderr_lz"});
  const auto add_axis = [&](const std::string& axis,
                            const std::vector<TransformerCell>& axis_cells) {
    for (const TransformerCell& cell : axis_cells) {
      for (std::size_t si = 0; si < cell.lz.size(); ++si) {
        seqs.add_row({axis, cell.axis_value, std::to_string(si),
                      std::to_string(cell.lz[si])});
      }
      const double n = static_cast<double>(cell.lz.size());
      cells.add_row({axis, cell.axis_value, std::to_string(cell.lz.size()),
                     format_double(cell.mean), format_double(cell.stddev),
                     format_double(n > 0 ? cell.stddev / std::sqrt(n) : 0.0)});
    }
  };
  add_axis("activation", result.activation_cells);
  add_axis("ln_scaling", result.gamma_cells);
  add_axis("depth", result.depth_cells);
  if (cfg.control_sequences > 0) {
    add_axis("control", {result.control});
  }
  write_text_file(out_path(opt, "transformer_sequences.csv"),
                  seqs.serialize());
  write_text_file(out_path(opt, "transformer_cells.csv"), cells.serialize());

  write_meta_file(
      out_path(opt, "transformer_cells.meta"),
      {{"n_layers", std::to_string(cfg.base.n_layers)},
       {"d_model", std::to_string(cfg.base.d_model)},
       {"n_heads", std::to_string(cfg.base.n_heads)},
       {"vocab_size", std::to_string(cfg.base.vocab_size)},
       {"context", std::to_string(cfg.base.context)},
       {"sequence_length", "100"},
       {"note", "reduced model dimensions; full-size runs exceed this "
                "toolkit's budget by design"},
       {"seed", std::to_string(opt.seed)}});
  return result;
}

}  // namespace archprobe
