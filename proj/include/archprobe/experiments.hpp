#pragma once

#include "archprobe/archspec.hpp"
#include "archprobe/stats.hpp"
#include "archprobe/sweep.hpp"
#include "archprobe/tasks.hpp"
#include "archprobe/trainer.hpp"
#include "archprobe/transformer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace archprobe {

// Shared options for every study: artifacts land in out_dir, seed feeds all
// derived streams, jobs bounds the worker pool (outputs are byte-identical
// for any jobs value).
struct StudyOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
};

// Compact architecture-variant vocabulary used by the sweep study and the
// CLI: an activation name with optional component suffixes joined by '+'
// ("relu", "tanh+ln", "relu+gate", "sine+res"), the literal "unbiased", or a
// full identifier accepted by parse_spec. Width defaults to 64.
ArchSpec variant_spec(const std::string& name);

// ---- random-network heatmap sweeps ----

struct SweepStudyConfig {
  std::vector<std::string> variants = {"relu", "tanh", "gaussian", "sine"};
  std::vector<int> depths = default_depth_grid();
  std::vector<double> scales = default_scale_grid();
  int seeds_per_cell = 20;
  int grid_m = 64;
  // Render seed-0 function maps for every other heatmap cell.
  bool function_maps = true;
};

struct SweepStudyResult {
  std::vector<std::string> variants;
  // One sweep per variant, normalized jointly across the whole batch.
  std::vector<HeatmapSweepResult> sweeps;
};

// Writes sweep_rows.csv (+ .meta), per-variant/per-measure cell-mean and
// cell-std CSVs, heatmap PGMs, and optional function-map PGMs.
SweepStudyResult experiment_sweep(const SweepStudyConfig& cfg,
                                  const StudyOptions& opt);

// ---- cross-measure correlation ----

struct CorrelateStudyConfig {
  int n_archs = 200;
};

// Writes correlation_scatter.csv and correlation_summary.csv.
CorrelationStudyResult experiment_correlate(const CorrelateStudyConfig& cfg,
                                            const StudyOptions& opt);

// ---- modulo-addition generalization study ----

struct ModuloStudyConfig {
  std::vector<int> Ms = {10, 7, 4};
  std::vector<ActivationKind> activations = {ActivationKind::ReLU,
                                             ActivationKind::Gaussian};
  std::vector<double> prefactors = {0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
  int seeds = 5;
  int width = 128;
  int depth = 4;
  int iterations = 3000;
  double learning_rate = 1e-3;
};

struct ModuloRun {
  int M = 0;
  ActivationKind activation = ActivationKind::ReLU;
  double prefactor = 1.0;
  int seed_index = 0;
  double lz_init = 0.0;  // grid LZ complexity at initialization
  double train_acc = 0.0;
  double test_acc = 0.0;
  double final_loss = 0.0;
};

struct ModuloFit {
  int M = 0;
  QuadraticFit fit;  // mean test accuracy vs prefactor, Gaussian activation
};

struct ModuloStudyResult {
  std::vector<ModuloRun> runs;
  std::vector<ModuloFit> gaussian_fits;
};

// Fixed per-M train/test split shared by every cell; BCE training. Writes
// modulo_runs.csv and modulo_fits.csv.
ModuloStudyResult run_modulo_study(const ModuloStudyConfig& cfg,
                                   const StudyOptions& opt);

// ---- Colored-MNIST shortcut study ----

struct CmnistStudyConfig {
  std::vector<ActivationKind> activations = {
      ActivationKind::TanH, ActivationKind::Gaussian, ActivationKind::Sine};
  std::vector<double> prefactors = {0.25, 0.5, 1.0, 2.0, 4.0};
  int seeds = 1;
  int width = 64;
  int depth = 2;
  // Reduced full-batch budget; enough for the color shortcut vs digit
  // ordering to settle at this data scale.
  int iterations = 800;
  double learning_rate = 0.002;
  int train_subsample = 6000;
  int test_count = 2000;
  // Directory holding the standard IDX files; empty selects the bundled
  // procedural digit corpus.
  std::string mnist_dir;
};

struct CmnistRun {
  ActivationKind activation = ActivationKind::TanH;
  double prefactor = 1.0;
  int seed_index = 0;
  double lz_init = 0.0;  // traversal-mode LZ at initialization
  double final_loss = 0.0;
  double color_acc = 0.0;  // 1-MAE on the color-correlated test set
  double digit_acc = 0.0;  // 1-MAE on the digit-correlated test set
};

struct CmnistStudyResult {
  std::vector<CmnistRun> runs;
};

// MSE regression on labels digit/9; predictions clamped to [0,1] before the
// 1-MAE metric. Writes cmnist_runs.csv (+ .meta).
CmnistStudyResult run_cmnist_study(const CmnistStudyConfig& cfg,
                                   const StudyOptions& opt);

// ---- coordinate-MLP (INR) shuffle study ----

struct CoordinateStudyConfig {
  // "shapes", "waves", or a path to a square PGM target.
  std::vector<std::string> targets = {"shapes", "waves"};
  std::vector<ActivationKind> activations = {
      ActivationKind::ReLU, ActivationKind::TanH, ActivationKind::Sine};
  std::vector<double> scales = {1.0, 4.0};
  int width = 64;
  int depth = 3;
  int iterations = 2000;
  double learning_rate = 0.02;
  int trajectory_log_every = 100;
  // Untrained-random reference distribution size per (activation, scale).
  int untrained_reference_seeds = 20;
  int m = 64;
};

struct CoordinateRun {
  std::string target;
  ActivationKind activation = ActivationKind::ReLU;
  double scale = 1.0;
  std::string run_id;
  double fourier_init = 0.0;
  double fourier_trained = 0.0;
  double fourier_shuffled = 0.0;  // trained weights shuffled within layers
  double untrained_mean = 0.0;    // reference distribution for this spec
  double untrained_std = 0.0;
  double train_acc = 0.0;  // clamped 1-MAE on the training mask
  double final_loss = 0.0;
};

struct CoordinateStudyResult {
  std::vector<CoordinateRun> runs;
};

// Per run: init/trained/shuffled function-map PGMs plus a trajectory CSV of
// (iteration, loss, mean |w|, C_Fourier). Writes inr_summary.csv.
CoordinateStudyResult run_coordinate_study(const CoordinateStudyConfig& cfg,
                                           const StudyOptions& opt);

// ---- untrained-transformer sequence study ----

struct TransformerStudyConfig {
  TransformerConfig base = desk_transformer_config();
  std::vector<std::string> activation_values = {"relu", "gelu"};
  int activation_sequences = 1000;
  std::vector<std::string> gamma_values = {"0.5", "1", "2", "4"};
  int gamma_sequences = 250;
  std::vector<std::string> depth_values = {"0", "3", "6"};
  int depth_sequences = 250;
  int control_sequences = 1000;
};

struct TransformerStudyResult {
  std::vector<TransformerCell> activation_cells;
  std::vector<TransformerCell> gamma_cells;
  std::vector<TransformerCell> depth_cells;
  TransformerCell control;  // iid-uniform token baseline
};

// Writes transformer_sequences.csv and transformer_cells.csv (+ .meta
// recording the reduced model dimensions).
TransformerStudyResult run_transformer_study(const TransformerStudyConfig& cfg,
                                             const StudyOptions& opt);

// ---- CLI ----

// Subcommands: probe, complexity, sweep, correlate, modulo, cmnist, inr,
// transformer, render. Exit 0 on success, 2 on configuration errors, 3 on
// numerical failure.
int cli_main(int argc, char** argv);

}  // namespace archprobe
