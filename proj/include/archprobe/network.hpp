#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "archprobe/archspec.hpp"

namespace archprobe {

enum class InitDistribution { GlorotUniform, Gaussian, UniformBall, LongTailed };

struct InitSpec {
  InitDistribution distribution = InitDistribution::GlorotUniform;
  double weight_scale = 1.0;
  std::uint64_t seed = 0;
};

struct Layer {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;
  Eigen::MatrixXd gate_W;  // present iff gating
  Eigen::VectorXd gate_b;
  Eigen::VectorXd ln_gain;  // present iff layernorm
  Eigen::VectorXd ln_offset;
};

// Immutable after initialization. layers holds spec.depth hidden layers
// followed by the output layer (width -> 1, plain affine). The unbiased
// variant stores the fixed frequency grid and its learnable phase/magnitude
// vectors instead.
struct Network {
  ArchSpec spec;
  std::vector<Layer> layers;
  Eigen::MatrixXd freq;   // C x d, rows pi*k over k in {0..K}^d
  Eigen::VectorXd phase;  // C
  Eigen::VectorXd mag;    // C
};

// Deterministic: (spec, init) fully determines every parameter, and per-layer
// streams are independent, so adding layers never perturbs earlier draws.
Network init_network(const ArchSpec& spec, const InitSpec& init);
Network init_network(const ArchSpec& spec, std::uint64_t seed);

inline constexpr double kLayernormEpsilon = 1e-5;

// Per-layer quantities retained by the batched forward pass for backprop.
struct LayerCache {
  Eigen::MatrixXd x;          // layer input, n x in
  Eigen::MatrixXd z;          // affine output
  Eigen::MatrixXd xhat;       // layernorm unit-normalized rows
  Eigen::VectorXd inv_sigma;  // per-example 1/sqrt(var+eps)
  Eigen::MatrixXd u;          // activation input (post-layernorm or z)
  Eigen::MatrixXd a;          // activation output
  Eigen::MatrixXd gz;         // gate preactivation
  Eigen::MatrixXd g;          // sigmoid gate
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  Eigen::MatrixXd unbiased_arg;  // n x C sine arguments
};

double forward(const Network& net, const Eigen::VectorXd& x);
Eigen::VectorXd forward_batch(const Network& net, const Eigen::MatrixXd& X);
Eigen::VectorXd forward_batch(const Network& net, const Eigen::MatrixXd& X,
                              ForwardCache& cache);

// Gradient of sum_i upstream_i * f(x_i) with respect to every learnable
// parameter. Layernorm gradients account for the mean/std coupling across
// channels. The unbiased frequency matrix is fixed and receives no gradient.
struct LayerGrads {
  Eigen::MatrixXd W;
  Eigen::VectorXd b;
  Eigen::MatrixXd gate_W;
  Eigen::VectorXd gate_b;
  Eigen::VectorXd ln_gain;
  Eigen::VectorXd ln_offset;
};

struct Gradients {
  std::vector<LayerGrads> layers;
  Eigen::VectorXd phase;
  Eigen::VectorXd mag;
};

Gradients backward_batch(const Network& net, const ForwardCache& cache,
                         const Eigen::VectorXd& upstream);
Gradients backward(const Network& net, const Eigen::VectorXd& x,
                   double upstream);

// Flat parameter views used by the optimizer and the finite-difference tests.
std::size_t parameter_count(const Network& net);
Eigen::VectorXd flatten_parameters(const Network& net);
void unflatten_parameters(Network& net, const Eigen::VectorXd& theta);
Eigen::VectorXd flatten_gradients(const Network& net, const Gradients& grads);

}  // namespace archprobe
