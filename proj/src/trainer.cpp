#include "archprobe/trainer.hpp"

#include "archprobe/activation.hpp"
#include "archprobe/complexity.hpp"
#include "archprobe/grid.hpp"
#include "archprobe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace archprobe {

namespace {

// Stable BCE on logits: max(f,0) - y*f + log1p(exp(-|f|)).
double bce_term(double f, double y) {
  return std::max(f, 0.0) - y * f + std::log1p(std::exp(-std::abs(f)));
}

Eigen::VectorXd loss_upstream(LossKind loss, const Eigen::VectorXd& pred,
                              const Eigen::VectorXd& y) {
  const double n = static_cast<double>(pred.size());
  Eigen::VectorXd up(pred.size());
  if (loss == LossKind::MSE) {
    up = 2.0 * (pred - y) / n;
  } else {
    for (Eigen::Index i = 0; i < pred.size(); ++i)
      up(i) = (sigmoid(pred(i)) - y(i)) / n;
  }
  return up;
}

double mean_abs_weight(const Network& net) {
  double acc = 0.0;
  std::size_t count = 0;
  if (net.spec.unbiased) {
    acc = net.mag.cwiseAbs().sum();
    count = static_cast<std::size_t>(net.mag.size());
  } else {
    for (const auto& layer : net.layers) {
      acc += layer.W.cwiseAbs().sum();
      count += static_cast<std::size_t>(layer.W.size());
      if (layer.gate_W.size() > 0) {
        acc += layer.gate_W.cwiseAbs().sum();
        count += static_cast<std::size_t>(layer.gate_W.size());
      }
    }
  }
  return count ? acc / static_cast<double>(count) : 0.0;
}

double probe_complexity(const Network& net, const TrainConfig& cfg) {
  switch (cfg.probe) {
    case TrajectoryProbe::None:
      return 0.0;
    case TrajectoryProbe::Fourier2D: {
      if (net.spec.input_dim != 2)
        throw std::invalid_argument(
            "Fourier2D trajectory probe needs input_dim == 2");
      const FunctionSample sample = sample_grid(net, GridSpec{2, cfg.probe_m});
      return fourier_complexity(sample, Window::Hann).score.raw;
    }
    case TrajectoryProbe::LZTraversal: {
      const TraversalSample trav = sample_traversals(
          net, net.spec.input_dim, cfg.probe_m, cfg.probe_seed);
      return lz_complexity(trav.values, 10, /*traversal_mode=*/true).raw;
    }
  }
  return 0.0;
}

}  // namespace

double compute_loss(LossKind loss, const Eigen::VectorXd& pred,
                    const Eigen::VectorXd& y) {
  if (pred.size() != y.size())
    throw std::invalid_argument("compute_loss: size mismatch");
  if (pred.size() == 0) throw std::invalid_argument("compute_loss: empty");
  double acc = 0.0;
  if (loss == LossKind::MSE) {
    acc = (pred - y).squaredNorm();
  } else {
    for (Eigen::Index i = 0; i < pred.size(); ++i)
      acc += bce_term(pred(i), y(i));
  }
  return acc / static_cast<double>(pred.size());
}

double binary_accuracy(const Eigen::VectorXd& pred_logits,
                       const Eigen::VectorXd& y) {
  if (pred_logits.size() != y.size())
    throw std::invalid_argument("binary_accuracy: size mismatch");
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const bool predicted = pred_logits(i) > 0.0;  // sigmoid(f) > 0.5
    const bool actual = y(i) > 0.5;
    if (predicted == actual) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(y.size());
}

TrainResult train(const Network& net, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y, const TrainConfig& cfg) {
  if (X.rows() != y.size())
    throw std::invalid_argument("train: X rows != y size");
  if (X.cols() != net.spec.input_dim)
    throw std::invalid_argument("train: X cols != input_dim");
  if (cfg.iterations < 0) throw std::invalid_argument("train: iterations < 0");
  if (!(cfg.learning_rate >= 0.0))
    throw std::invalid_argument("train: bad learning rate");
  if (!X.allFinite() || !y.allFinite())
    throw std::invalid_argument("train: non-finite data");
  if (cfg.loss == LossKind::BinaryCrossEntropy &&
      (y.minCoeff() < 0.0 || y.maxCoeff() > 1.0))
    throw std::invalid_argument("train: BCE targets must lie in [0,1]");

  TrainResult result;
  result.net = net;

  Eigen::VectorXd theta = flatten_parameters(result.net);
  AdamState adam;
  adam.m = Eigen::VectorXd::Zero(theta.size());
  adam.v = Eigen::VectorXd::Zero(theta.size());

  auto fail = [&](int iteration) {
    throw std::runtime_error(
        "train: non-finite loss at iteration " + std::to_string(iteration) +
        " (parameter norm " + std::to_string(theta.norm()) + ")");
  };

  double loss_value = 0.0;
  for (int it = 0; it < cfg.iterations; ++it) {
    ForwardCache cache;
    const Eigen::VectorXd pred = forward_batch(result.net, X, cache);
    loss_value = compute_loss(cfg.loss, pred, y);
    if (!std::isfinite(loss_value)) fail(it);

    if (cfg.trajectory_log_every > 0 && it % cfg.trajectory_log_every == 0) {
      result.trajectory.points.push_back({it, loss_value,
                                          mean_abs_weight(result.net),
                                          probe_complexity(result.net, cfg)});
    }

    const Eigen::VectorXd upstream = loss_upstream(cfg.loss, pred, y);
    const Gradients grads = backward_batch(result.net, cache, upstream);
    Eigen::VectorXd g = flatten_gradients(result.net, grads);
    if (cfg.grad_clip > 0.0) {
      const double gn = g.norm();
      if (gn > cfg.grad_clip) g *= cfg.grad_clip / gn;
    }

    adam.t += 1;
    adam.m = cfg.beta1 * adam.m + (1.0 - cfg.beta1) * g;
    adam.v = cfg.beta2 * adam.v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    const double mc = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.t));
    const double vc = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.t));
    const Eigen::ArrayXd mhat = adam.m.array() / mc;
    const Eigen::ArrayXd vhat = adam.v.array() / vc;
    theta.array() -= cfg.learning_rate * mhat / (vhat.sqrt() + cfg.epsilon);
    if (!theta.allFinite()) fail(it);
    unflatten_parameters(result.net, theta);
  }

  const Eigen::VectorXd final_pred = forward_batch(result.net, X);
  result.final_loss = compute_loss(cfg.loss, final_pred, y);
  if (!std::isfinite(result.final_loss)) fail(cfg.iterations);
  if (cfg.trajectory_log_every > 0) {
    result.trajectory.points.push_back({cfg.iterations, result.final_loss,
                                        mean_abs_weight(result.net),
                                        probe_complexity(result.net, cfg)});
  }
  return result;
}

namespace {

// Fisher-Yates over an Eigen matrix/vector viewed as flat storage.
template <typename Mat>
void permute_entries(Mat& m, Rng& rng) {
  double* data = m.data();
  const auto n = static_cast<std::size_t>(m.size());
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t j = rng.below(i);
    std::swap(data[i - 1], data[j]);
  }
}

}  // namespace

Network shuffle_within_layers(const Network& net, std::uint64_t seed) {
  Network out = net;
  if (out.spec.unbiased) {
    Rng rp = Rng::stream(seed, 0, StreamRole::Shuffle);
    permute_entries(out.phase, rp);
    Rng rm = Rng::stream(seed, 1, StreamRole::Shuffle);
    permute_entries(out.mag, rm);
    return out;
  }
  for (std::size_t li = 0; li < out.layers.size(); ++li) {
    Layer& layer = out.layers[li];
    const std::uint64_t base = static_cast<std::uint64_t>(li) * 4;
    Rng rw = Rng::stream(seed, base + 0, StreamRole::Shuffle);
    permute_entries(layer.W, rw);
    Rng rb = Rng::stream(seed, base + 1, StreamRole::Shuffle);
    permute_entries(layer.b, rb);
    if (layer.gate_W.size() > 0) {
      Rng rgw = Rng::stream(seed, base + 2, StreamRole::Shuffle);
      permute_entries(layer.gate_W, rgw);
      Rng rgb = Rng::stream(seed, base + 3, StreamRole::Shuffle);
      permute_entries(layer.gate_b, rgb);
    }
  }
  return out;
}

std::vector<LayerWeightStats> weight_stats(const Network& net) {
  std::vector<LayerWeightStats> out;
  auto summarize = [](std::vector<double> mags) {
    LayerWeightStats s;
    if (mags.empty()) return s;
    std::sort(mags.begin(), mags.end());
    const auto n = mags.size();
    double acc = 0.0;
    for (const double v : mags) acc += v;
    s.mean_abs = acc / static_cast<double>(n);
    s.max_abs = mags.back();
    auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(n - 1);
      const auto lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, n - 1);
      const double frac = pos - static_cast<double>(lo);
      return mags[lo] * (1.0 - frac) + mags[hi] * frac;
    };
    s.q50 = quantile(0.5);
    s.q90 = quantile(0.9);
    s.q99 = quantile(0.99);
    return s;
  };

  if (net.spec.unbiased) {
    std::vector<double> mags(net.mag.data(), net.mag.data() + net.mag.size());
    for (double& v : mags) v = std::abs(v);
    out.push_back(summarize(std::move(mags)));
    return out;
  }
  for (const auto& layer : net.layers) {
    std::vector<double> mags;
    mags.reserve(static_cast<std::size_t>(layer.W.size() + layer.gate_W.size()));
    for (Eigen::Index i = 0; i < layer.W.size(); ++i)
      mags.push_back(std::abs(layer.W.data()[i]));
    for (Eigen::Index i = 0; i < layer.gate_W.size(); ++i)
      mags.push_back(std::abs(layer.gate_W.data()[i]));
    out.push_back(summarize(std::move(mags)));
  }
  return out;
}

}  // namespace archprobe
