#include "archprobe/complexity.hpp"
#include "archprobe/csv.hpp"
#include "archprobe/experiments.hpp"
#include "archprobe/grid.hpp"
#include "archprobe/network.hpp"
#include "archprobe/pgm.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace archprobe {

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("ARCHPROBE_OUT");
  return (env && *env) ? std::string(env) : std::string(".");
}

std::vector<ActivationKind> parse_activations(
    const std::vector<std::string>& names) {
  std::vector<ActivationKind> kinds;
  kinds.reserve(names.size());
  for (const std::string& n : names) {
    const auto k = parse_activation(n);
    if (!k) throw std::invalid_argument("unknown activation '" + n + "'");
    kinds.push_back(*k);
  }
  return kinds;
}

std::string artifact_path(const StudyOptions& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  return (std::filesystem::path(opt.out_dir) / name).string();
}

// All four measures of a 2D sample, printed as key=value lines and appended
// to `table` (columns: source, measure, raw, window).
void score_sample(const FunctionSample& sample, const std::string& source,
                  CsvTable& table) {
  const double f = fourier_complexity(sample, Window::Hann).score.raw;
  const double c = poly_complexity(sample, PolyBasis::Chebyshev).score.raw;
  const double l = poly_complexity(sample, PolyBasis::Legendre).score.raw;
  const double z = lz_complexity(sample.values).raw;
  table.add_row({source, "fourier", format_double(f), "hann"});
  table.add_row({source, "chebyshev", format_double(c), ""});
  table.add_row({source, "legendre", format_double(l), ""});
  table.add_row({source, "lz", format_double(z), ""});
  std::cout << "fourier=" << format_double(f) << "\n"
            << "chebyshev=" << format_double(c) << "\n"
            << "legendre=" << format_double(l) << "\n"
            << "lz=" << format_double(z) << "\n";
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"archprobe: complexity probes for random neural networks"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file (subcommand options "
                                 "under [subcommand] sections)");

  std::uint64_t seed = 0;
  std::string out_dir = default_out_dir();
  int jobs = 1;
  app.add_option("--seed", seed, "base seed for every derived stream");
  app.add_option("--out-dir", out_dir,
                 "artifact directory (default: $ARCHPROBE_OUT or '.')");
  app.add_option("--jobs", jobs,
                 "worker threads; outputs are byte-identical for any value");

  CLI::App* probe = app.add_subcommand(
      "probe", "sample one random network: function-map PGM plus scores");
  std::string probe_arch = "relu";
  int probe_m = 64;
  probe->add_option("--arch", probe_arch,
                    "variant ('tanh+ln') or full identifier");
  probe->add_option("--m", probe_m, "grid resolution per axis");

  CLI::App* complexity = app.add_subcommand(
      "complexity", "score an existing square PGM function map");
  std::string cx_pgm;
  complexity->add_option("--pgm", cx_pgm, "input image")->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "heatmap sweep over depth x weight scale, pooled "
               "normalization across variants");
  SweepStudyConfig sweep_cfg;
  bool no_funcmaps = false;
  sweep->add_option("--variant", sweep_cfg.variants,
                    "architecture variants (repeatable)");
  sweep->add_option("--seeds", sweep_cfg.seeds_per_cell, "seeds per cell");
  sweep->add_option("--grid-m", sweep_cfg.grid_m, "grid resolution");
  sweep->add_flag("--no-funcmaps", no_funcmaps,
                  "skip the per-cell function-map PGMs");

  CLI::App* correlate =
      app.add_subcommand("correlate", "cross-measure rank correlation over a "
                                      "random architecture pool");
  CorrelateStudyConfig corr_cfg;
  correlate->add_option("--n", corr_cfg.n_archs, "pool size");

  CLI::App* modulo = app.add_subcommand(
      "modulo", "train MLPs on modular-addition labels of varying frequency");
  ModuloStudyConfig mod_cfg;
  std::vector<std::string> mod_acts = {"relu", "gaussian"};
  modulo->add_option("--modulus", mod_cfg.Ms, "label moduli (repeatable)");
  modulo->add_option("--activation", mod_acts, "activations (repeatable)");
  modulo->add_option("--prefactor", mod_cfg.prefactors,
                     "activation prefactors (repeatable)");
  modulo->add_option("--seeds", mod_cfg.seeds, "seeds per cell");
  modulo->add_option("--iterations", mod_cfg.iterations, "Adam updates");
  modulo->add_option("--width", mod_cfg.width, "hidden width");
  modulo->add_option("--depth", mod_cfg.depth, "hidden depth");
  modulo->add_option("--lr", mod_cfg.learning_rate, "learning rate");

  CLI::App* cmnist = app.add_subcommand(
      "cmnist", "color-shortcut study on digit images with a color column");
  CmnistStudyConfig cm_cfg;
  std::vector<std::string> cm_acts = {"tanh", "gaussian", "sine"};
  cmnist->add_option("--activation", cm_acts, "activations (repeatable)");
  cmnist->add_option("--prefactor", cm_cfg.prefactors,
                     "activation prefactors (repeatable)");
  cmnist->add_option("--seeds", cm_cfg.seeds, "seeds per cell");
  cmnist->add_option("--iterations", cm_cfg.iterations, "Adam updates");
  cmnist->add_option("--lr", cm_cfg.learning_rate, "learning rate");
  cmnist->add_option("--train-subsample", cm_cfg.train_subsample,
                     "training examples");
  cmnist->add_option("--test-count", cm_cfg.test_count, "test examples");
  cmnist->add_option("--mnist-dir", cm_cfg.mnist_dir,
                     "directory with the standard IDX files; omit for the "
                     "bundled procedural digits");

  CLI::App* inr = app.add_subcommand(
      "inr", "coordinate-MLP image fits with trained-weight shuffling");
  CoordinateStudyConfig inr_cfg;
  std::vector<std::string> inr_acts = {"relu", "tanh", "sine"};
  inr->add_option("--target", inr_cfg.targets,
                  "'shapes', 'waves', or a square PGM path (repeatable)");
  inr->add_option("--activation", inr_acts, "activations (repeatable)");
  inr->add_option("--scale", inr_cfg.scales, "init weight scales (repeatable)");
  inr->add_option("--iterations", inr_cfg.iterations, "Adam updates");
  inr->add_option("--lr", inr_cfg.learning_rate, "learning rate");
  inr->add_option("--width", inr_cfg.width, "hidden width");
  inr->add_option("--depth", inr_cfg.depth, "hidden depth");
  inr->add_option("--log-every", inr_cfg.trajectory_log_every,
                  "trajectory cadence in iterations");
  inr->add_option("--ref-seeds", inr_cfg.untrained_reference_seeds,
                  "untrained reference draws per (activation, scale)");
  inr->add_option("--m", inr_cfg.m, "grid resolution");

  CLI::App* transformer = app.add_subcommand(
      "transformer", "LZ complexity of greedy sequences from random "
                     "decoder-only models");
  TransformerStudyConfig tf_cfg;
  transformer->add_option("--layers", tf_cfg.base.n_layers, "blocks");
  transformer->add_option("--d-model", tf_cfg.base.d_model, "model width");
  transformer->add_option("--heads", tf_cfg.base.n_heads, "attention heads");
  transformer->add_option("--vocab", tf_cfg.base.vocab_size, "vocabulary");
  transformer->add_option("--context", tf_cfg.base.context, "context length");
  transformer->add_option("--activation-sequences",
                          tf_cfg.activation_sequences,
                          "sequences per MLP activation");
  transformer->add_option("--gamma-sequences", tf_cfg.gamma_sequences,
                          "sequences per layernorm scaling");
  transformer->add_option("--depth-sequences", tf_cfg.depth_sequences,
                          "sequences per depth");
  transformer->add_option("--control-sequences", tf_cfg.control_sequences,
                          "iid-uniform control sequences");

  CLI::App* render = app.add_subcommand(
      "render", "render a training target or a random network as PGM");
  std::string render_target, render_arch;
  int render_m = 64;
  render->add_option("--target", render_target,
                     "'shapes', 'waves', or a PGM path to re-render");
  render->add_option("--arch", render_arch, "variant or full identifier");
  render->add_option("--m", render_m, "grid resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const StudyOptions opt{out_dir, seed, jobs};
  try {
    if (jobs < 1) throw std::invalid_argument("--jobs must be positive");

    if (probe->parsed()) {
      const ArchSpec spec = variant_spec(probe_arch);
      if (spec.input_dim != 2)
        throw std::invalid_argument("probe: only 2D inputs render to PGM");
      const Network net = init_network(spec, opt.seed);
      const FunctionSample sample =
          sample_grid(net, GridSpec{2, probe_m}, opt.jobs);
      const std::string id = describe(spec);
      write_bytes(artifact_path(opt, "probe_" + id + ".pgm"),
                  render_pgm(sample));
      CsvTable table({"source", "measure", "raw", "window"});
      score_sample(sample, id, table);
      write_text_file(artifact_path(opt, "probe_scores.csv"),
                      table.serialize());
    } else if (complexity->parsed()) {
      const FunctionSample sample = read_pgm(cx_pgm);
      CsvTable table({"source", "measure", "raw", "window"});
      score_sample(sample, cx_pgm, table);
      write_text_file(artifact_path(opt, "complexity.csv"),
                      table.serialize());
    } else if (sweep->parsed()) {
      sweep_cfg.function_maps = !no_funcmaps;
      const SweepStudyResult res = experiment_sweep(sweep_cfg, opt);
      int nonfinite = 0;
      for (const HeatmapSweepResult& s : res.sweeps)
        nonfinite += s.nonfinite_count;
      std::cout << "sweep: " << res.sweeps.size() << " variants, "
                << nonfinite << " non-finite samples, artifacts in "
                << opt.out_dir << "\n";
    } else if (correlate->parsed()) {
      const CorrelationStudyResult res = experiment_correlate(corr_cfg, opt);
      std::cout << "fourier_lz=" << format_double(res.rho_fourier_lz) << "\n"
                << "fourier_chebyshev="
                << format_double(res.rho_fourier_chebyshev) << "\n"
                << "chebyshev_lz=" << format_double(res.rho_chebyshev_lz)
                << "\n";
    } else if (modulo->parsed()) {
      mod_cfg.activations = parse_activations(mod_acts);
      const ModuloStudyResult res = run_modulo_study(mod_cfg, opt);
      std::cout << "modulo: " << res.runs.size() << " runs, artifacts in "
                << opt.out_dir << "\n";
      for (const ModuloFit& f : res.gaussian_fits)
        std::cout << "gaussian_peak_M" << f.M << "="
                  << format_double(f.fit.peak) << "\n";
    } else if (cmnist->parsed()) {
      cm_cfg.activations = parse_activations(cm_acts);
      const CmnistStudyResult res = run_cmnist_study(cm_cfg, opt);
      std::cout << "cmnist: " << res.runs.size() << " runs, artifacts in "
                << opt.out_dir << "\n";
    } else if (inr->parsed()) {
      inr_cfg.activations = parse_activations(inr_acts);
      const CoordinateStudyResult res = run_coordinate_study(inr_cfg, opt);
      std::cout << "inr: " << res.runs.size() << " runs, artifacts in "
                << opt.out_dir << "\n";
    } else if (transformer->parsed()) {
      const TransformerStudyResult res = run_transformer_study(tf_cfg, opt);
      if (!res.control.lz.empty())
        std::cout << "control_mean_lz=" << format_double(res.control.mean)
                  << "\n";
      for (const TransformerCell& c : res.activation_cells)
        std::cout << "activation_" << c.axis_value << "_mean_lz="
                  << format_double(c.mean) << "\n";
      std::cout << "transformer: artifacts in " << opt.out_dir << "\n";
    } else if (render->parsed()) {
      const bool has_target = !render_target.empty();
      const bool has_arch = !render_arch.empty();
      if (has_target == has_arch)
        throw std::invalid_argument(
            "render: pass exactly one of --target or --arch");
      if (has_target) {
        FunctionSample sample;
        if (render_target == "waves") {
          const CoordinateImageTask t = gen_waves(2.0, render_m);
          sample = FunctionSample{GridSpec{2, render_m}, t.target, "waves"};
        } else if (render_target == "shapes") {
          const CoordinateImageTask t = gen_shapes(render_m, opt.seed);
          sample = FunctionSample{GridSpec{2, render_m}, t.target, "shapes"};
        } else {
          sample = read_pgm(render_target);
        }
        const std::string name =
            has_target && (render_target == "waves" ||
                           render_target == "shapes")
                ? render_target
                : std::filesystem::path(render_target).stem().string();
        write_bytes(artifact_path(opt, "render_" + name + ".pgm"),
                    render_pgm(sample));
      } else {
        const ArchSpec spec = variant_spec(render_arch);
        if (spec.input_dim != 2)
          throw std::invalid_argument("render: only 2D inputs render to PGM");
        const Network net = init_network(spec, opt.seed);
        const FunctionSample sample =
            sample_grid(net, GridSpec{2, render_m}, opt.jobs);
        write_bytes(artifact_path(opt, "render_" + describe(spec) + ".pgm"),
                    render_pgm(sample));
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace archprobe
