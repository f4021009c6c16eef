#pragma once

#include "archprobe/network.hpp"

#include <cstdint>
#include <vector>

namespace archprobe {

enum class LossKind { MSE, BinaryCrossEntropy };

// Complexity probe attached to trajectory logging. Fourier2D samples the
// current function on a 2D grid; LZTraversal walks random corner-to-corner
// segments, which is the only option for high-dimensional inputs.
enum class TrajectoryProbe { None, Fourier2D, LZTraversal };

struct TrainConfig {
  LossKind loss = LossKind::MSE;
  double learning_rate = 1e-3;
  int iterations = 1000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  // 0 disables trajectory logging entirely; otherwise iterations 0, k, 2k...
  // are logged pre-update plus one final post-update point.
  int trajectory_log_every = 0;
  TrajectoryProbe probe = TrajectoryProbe::None;
  int probe_m = 64;
  std::uint64_t probe_seed = 0;
  // Global-norm gradient clipping; 0 disables (the default regime).
  double grad_clip = 0.0;
};

struct AdamState {
  Eigen::VectorXd m;  // first moment, parameter-shaped
  Eigen::VectorXd v;  // second moment
  std::int64_t t = 0;
};

struct TrajectoryPoint {
  int iteration = 0;
  double loss = 0.0;
  double mean_abs_weight = 0.0;
  double complexity = 0.0;  // raw score of the active probe, 0 when None
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
};

struct TrainResult {
  Network net;
  Trajectory trajectory;
  double final_loss = 0.0;
};

// Full-batch training: exactly cfg.iterations Adam updates, no early
// stopping. X is n x input_dim, y is n targets (in [0,1] for BCE).
// Throws std::runtime_error with iteration and parameter norm when the loss
// goes non-finite.
TrainResult train(const Network& net, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y, const TrainConfig& cfg);

// Loss + training-accuracy helpers shared by experiments.
double compute_loss(LossKind loss, const Eigen::VectorXd& pred,
                    const Eigen::VectorXd& y);
// BCE classification accuracy: prediction is 1((sigmoid(f) > 0.5)).
double binary_accuracy(const Eigen::VectorXd& pred_logits,
                       const Eigen::VectorXd& y);

// Independently permutes each layer's weight entries and bias entries
// (gates likewise); layernorm gain/offset stay in place. The per-block value
// multiset is preserved exactly.
Network shuffle_within_layers(const Network& net, std::uint64_t seed);

struct LayerWeightStats {
  double mean_abs = 0.0;
  double max_abs = 0.0;
  double q50 = 0.0;  // quantiles of |w|
  double q90 = 0.0;
  double q99 = 0.0;
};

// Weight-matrix magnitude summaries, one entry per layer (biases excluded).
std::vector<LayerWeightStats> weight_stats(const Network& net);

}  // namespace archprobe
