#include "archprobe/network.hpp"

#include <cmath>
#include <stdexcept>

#include "archprobe/rng.hpp"

namespace archprobe {

namespace {

constexpr double kPi = 3.14159265358979323846;

void fill_weights(Eigen::MatrixXd& W, const InitSpec& init, Rng& rng) {
  const auto fan_out = W.rows();
  const auto fan_in = W.cols();
  const double s =
      init.weight_scale * std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  switch (init.distribution) {
    case InitDistribution::GlorotUniform:
      for (Eigen::Index r = 0; r < fan_out; ++r)
        for (Eigen::Index c = 0; c < fan_in; ++c) W(r, c) = rng.uniform(-s, s);
      break;
    case InitDistribution::Gaussian: {
      const double sigma = s / std::sqrt(3.0);
      for (Eigen::Index r = 0; r < fan_out; ++r)
        for (Eigen::Index c = 0; c < fan_in; ++c) W(r, c) = sigma * rng.gaussian();
      break;
    }
    case InitDistribution::UniformBall: {
      // Each row uniform in the L2 ball of radius s*sqrt(fan_in).
      const double radius = s * std::sqrt(static_cast<double>(fan_in));
      for (Eigen::Index r = 0; r < fan_out; ++r) {
        Eigen::VectorXd dir(fan_in);
        for (Eigen::Index c = 0; c < fan_in; ++c) dir(c) = rng.gaussian();
        const double norm = dir.norm();
        const double u = rng.uniform();
        const double scale =
            norm > 0.0
                ? radius * std::pow(u, 1.0 / static_cast<double>(fan_in)) / norm
                : 0.0;
        W.row(r) = (dir * scale).transpose();
      }
      break;
    }
    case InitDistribution::LongTailed: {
      // Student-t(3) rescaled to variance s^2/3, matching U(-s,s).
      const double scale = s / 3.0;
      for (Eigen::Index r = 0; r < fan_out; ++r)
        for (Eigen::Index c = 0; c < fan_in; ++c)
          W(r, c) = scale * rng.student_t3();
      break;
    }
  }
}

void fill_biases(Eigen::VectorXd& b, double bias_scale, Rng& rng) {
  for (Eigen::Index i = 0; i < b.size(); ++i)
    b(i) = rng.uniform(-bias_scale, bias_scale);
}

Network init_unbiased(const ArchSpec& spec, const InitSpec& init) {
  Network net;
  net.spec = spec;
  const int K = spec.unbiased_K;
  const int d = spec.input_dim;
  Eigen::Index count = 1;
  for (int axis = 0; axis < d; ++axis) count *= K + 1;
  net.freq.resize(count, d);
  // Row-major enumeration of {0..K}^d with the last axis fastest.
  std::vector<int> k(d, 0);
  for (Eigen::Index row = 0; row < count; ++row) {
    for (int axis = 0; axis < d; ++axis)
      net.freq(row, axis) = kPi * static_cast<double>(k[axis]);
    for (int axis = d - 1; axis >= 0; --axis) {
      if (++k[axis] <= K) break;
      k[axis] = 0;
    }
  }
  Rng phase_rng = Rng::stream(init.seed, 0, StreamRole::Phases);
  Rng mag_rng = Rng::stream(init.seed, 0, StreamRole::Magnitudes);
  net.phase.resize(count);
  net.mag.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) net.phase(i) = phase_rng.uniform(-kPi, kPi);
  for (Eigen::Index i = 0; i < count; ++i)
    net.mag(i) = init.weight_scale * mag_rng.uniform();
  return net;
}

}  // namespace

Network init_network(const ArchSpec& spec, const InitSpec& init) {
  validate(spec);
  if (spec.unbiased) return init_unbiased(spec, init);
  Network net;
  net.spec = spec;
  net.layers.resize(spec.depth + 1);
  for (int l = 0; l <= spec.depth; ++l) {
    Layer& layer = net.layers[l];
    const int fan_in = l == 0 ? spec.input_dim : spec.width;
    const int fan_out = l == spec.depth ? 1 : spec.width;
    layer.W.resize(fan_out, fan_in);
    layer.b.resize(fan_out);
    Rng w_rng = Rng::stream(init.seed, l, StreamRole::Weights);
    Rng b_rng = Rng::stream(init.seed, l, StreamRole::Biases);
    fill_weights(layer.W, init, w_rng);
    fill_biases(layer.b, spec.bias_scale, b_rng);
    const bool hidden = l < spec.depth;
    if (hidden && spec.gating) {
      layer.gate_W.resize(fan_out, fan_in);
      layer.gate_b.resize(fan_out);
      Rng gw_rng = Rng::stream(init.seed, l, StreamRole::GateWeights);
      Rng gb_rng = Rng::stream(init.seed, l, StreamRole::GateBiases);
      fill_weights(layer.gate_W, init, gw_rng);
      fill_biases(layer.gate_b, spec.bias_scale, gb_rng);
    }
    if (hidden && spec.layernorm) {
      layer.ln_gain = Eigen::VectorXd::Ones(fan_out);
      layer.ln_offset = Eigen::VectorXd::Zero(fan_out);
    }
  }
  return net;
}

Network init_network(const ArchSpec& spec, std::uint64_t seed) {
  return init_network(
      spec, InitSpec{InitDistribution::GlorotUniform, spec.weight_scale, seed});
}

namespace {

void apply_activation(ActivationKind kind, double prefactor,
                      const Eigen::MatrixXd& u, Eigen::MatrixXd& a) {
  a = u.unaryExpr(
      [kind, prefactor](double v) { return activate(kind, prefactor * v); });
}

Eigen::VectorXd forward_impl(const Network& net, const Eigen::MatrixXd& X,
                             ForwardCache* cache) {
  const ArchSpec& spec = net.spec;
  if (X.cols() != spec.input_dim)
    throw std::invalid_argument("input dimension mismatch");
  if (spec.unbiased) {
    Eigen::MatrixXd arg = X * net.freq.transpose();
    arg.rowwise() += net.phase.transpose();
    Eigen::VectorXd out = arg.array().sin().matrix() * net.mag;
    if (cache) cache->unbiased_arg = std::move(arg);
    if (!out.allFinite()) throw std::runtime_error("non-finite network output");
    return out;
  }
  const Eigen::Index n = X.rows();
  if (cache) cache->layers.resize(net.layers.size());
  Eigen::MatrixXd h = X;
  for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    LayerCache local;
    LayerCache& c = cache ? cache->layers[l] : local;
    c.x = h;
    c.z.noalias() = h * layer.W.transpose();
    c.z.rowwise() += layer.b.transpose();
    if (spec.layernorm) {
      const auto width = c.z.cols();
      c.inv_sigma.resize(n);
      c.xhat.resize(n, width);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double mean = c.z.row(i).mean();
        const double var =
            (c.z.row(i).array() - mean).square().sum() / static_cast<double>(width);
        c.inv_sigma(i) = 1.0 / std::sqrt(var + kLayernormEpsilon);
        c.xhat.row(i) = (c.z.row(i).array() - mean) * c.inv_sigma(i);
      }
      c.u = c.xhat.array().rowwise() * layer.ln_gain.transpose().array();
      c.u.array().rowwise() += layer.ln_offset.transpose().array();
    } else {
      c.u = c.z;
    }
    apply_activation(spec.activation, spec.prefactor, c.u, c.a);
    Eigen::MatrixXd y;
    if (spec.gating) {
      c.gz.noalias() = c.x * layer.gate_W.transpose();
      c.gz.rowwise() += layer.gate_b.transpose();
      c.g = c.gz.unaryExpr([](double v) { return sigmoid(v); });
      y = c.a.cwiseProduct(c.g);
    } else {
      y = c.a;
    }
    h = spec.residual ? Eigen::MatrixXd(c.u + y) : std::move(y);
  }
  const Layer& out_layer = net.layers.back();
  if (cache) cache->layers.back().x = h;
  Eigen::VectorXd out = h * out_layer.W.transpose().col(0);
  out.array() += out_layer.b(0);
  if (!out.allFinite()) throw std::runtime_error("non-finite network output");
  return out;
}

}  // namespace

Eigen::VectorXd forward_batch(const Network& net, const Eigen::MatrixXd& X) {
  return forward_impl(net, X, nullptr);
}

Eigen::VectorXd forward_batch(const Network& net, const Eigen::MatrixXd& X,
                              ForwardCache& cache) {
  return forward_impl(net, X, &cache);
}

double forward(const Network& net, const Eigen::VectorXd& x) {
  Eigen::MatrixXd X(1, x.size());
  X.row(0) = x.transpose();
  return forward_batch(net, X)(0);
}

Gradients backward_batch(const Network& net, const ForwardCache& cache,
                         const Eigen::VectorXd& upstream) {
  const ArchSpec& spec = net.spec;
  Gradients grads;
  if (spec.unbiased) {
    const Eigen::MatrixXd& arg = cache.unbiased_arg;
    grads.mag = arg.array().sin().matrix().transpose() * upstream;
    const Eigen::MatrixXd cosarg = arg.array().cos().matrix();
    const Eigen::VectorXd weighted = cosarg.transpose() * upstream;
    grads.phase = weighted.cwiseProduct(net.mag);
    return grads;
  }
  grads.layers.resize(net.layers.size());
  const Layer& out_layer = net.layers.back();
  const Eigen::MatrixXd& h_last = cache.layers.back().x;
  LayerGrads& og = grads.layers.back();
  og.W = (upstream.transpose() * h_last);
  og.b = Eigen::VectorXd::Constant(1, upstream.sum());
  Eigen::MatrixXd dh = upstream * out_layer.W;  // n x width
  for (int l = static_cast<int>(net.layers.size()) - 2; l >= 0; --l) {
    const Layer& layer = net.layers[l];
    const LayerCache& c = cache.layers[l];
    LayerGrads& lg = grads.layers[l];
    // dh is the gradient at the layer output: residual ? u + a.*g : a.*g.
    Eigen::MatrixXd d_ag = dh;
    Eigen::MatrixXd d_a, d_gz;
    if (spec.gating) {
      d_a = d_ag.cwiseProduct(c.g);
      d_gz = d_ag.cwiseProduct(c.a)
                 .cwiseProduct(c.g)
                 .cwiseProduct((1.0 - c.g.array()).matrix());
    } else {
      d_a = std::move(d_ag);
    }
    const double pref = spec.prefactor;
    const ActivationKind kind = spec.activation;
    Eigen::MatrixXd d_u =
        d_a.cwiseProduct(c.u.unaryExpr([kind, pref](double v) {
          return pref * activate_grad(kind, pref * v);
        }));
    if (spec.residual) d_u += dh;
    Eigen::MatrixXd d_z;
    if (spec.layernorm) {
      Eigen::MatrixXd d_xhat =
          d_u.array().rowwise() * layer.ln_gain.transpose().array();
      lg.ln_gain = d_u.cwiseProduct(c.xhat).colwise().sum().transpose();
      lg.ln_offset = d_u.colwise().sum().transpose();
      const auto width = static_cast<double>(d_xhat.cols());
      d_z.resizeLike(d_xhat);
      for (Eigen::Index i = 0; i < d_xhat.rows(); ++i) {
        const double mean_d = d_xhat.row(i).mean();
        const double mean_dx =
            d_xhat.row(i).cwiseProduct(c.xhat.row(i)).sum() / width;
        d_z.row(i) =
            c.inv_sigma(i) *
            (d_xhat.row(i).array() - mean_d - c.xhat.row(i).array() * mean_dx);
      }
    } else {
      d_z = std::move(d_u);
    }
    lg.W.noalias() = d_z.transpose() * c.x;
    lg.b = d_z.colwise().sum().transpose();
    dh.noalias() = d_z * layer.W;
    if (spec.gating) {
      lg.gate_W.noalias() = d_gz.transpose() * c.x;
      lg.gate_b = d_gz.colwise().sum().transpose();
      dh.noalias() += d_gz * layer.gate_W;
    }
  }
  return grads;
}

Gradients backward(const Network& net, const Eigen::VectorXd& x,
                   double upstream) {
  Eigen::MatrixXd X(1, x.size());
  X.row(0) = x.transpose();
  ForwardCache cache;
  forward_batch(net, X, cache);
  Eigen::VectorXd up(1);
  up(0) = upstream;
  return backward_batch(net, cache, up);
}

namespace {

template <typename Visit>
void visit_parameters(const Network& net, Visit&& visit) {
  if (net.spec.unbiased) {
    visit(net.phase);
    visit(net.mag);
    return;
  }
  for (const Layer& layer : net.layers) {
    visit(layer.W);
    visit(layer.b);
    if (layer.gate_W.size() > 0) {
      visit(layer.gate_W);
      visit(layer.gate_b);
    }
    if (layer.ln_gain.size() > 0) {
      visit(layer.ln_gain);
      visit(layer.ln_offset);
    }
  }
}

}  // namespace

std::size_t parameter_count(const Network& net) {
  std::size_t total = 0;
  visit_parameters(net, [&](const auto& block) { total += block.size(); });
  return total;
}

Eigen::VectorXd flatten_parameters(const Network& net) {
  Eigen::VectorXd theta(parameter_count(net));
  Eigen::Index at = 0;
  visit_parameters(net, [&](const auto& block) {
    theta.segment(at, block.size()) =
        Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
    at += block.size();
  });
  return theta;
}

void unflatten_parameters(Network& net, const Eigen::VectorXd& theta) {
  if (static_cast<std::size_t>(theta.size()) != parameter_count(net))
    throw std::invalid_argument("parameter vector size mismatch");
  Eigen::Index at = 0;
  auto take = [&](auto& block) {
    Eigen::Map<Eigen::VectorXd>(block.data(), block.size()) =
        theta.segment(at, block.size());
    at += block.size();
  };
  if (net.spec.unbiased) {
    take(net.phase);
    take(net.mag);
    return;
  }
  for (Layer& layer : net.layers) {
    take(layer.W);
    take(layer.b);
    if (layer.gate_W.size() > 0) {
      take(layer.gate_W);
      take(layer.gate_b);
    }
    if (layer.ln_gain.size() > 0) {
      take(layer.ln_gain);
      take(layer.ln_offset);
    }
  }
}

Eigen::VectorXd flatten_gradients(const Network& net, const Gradients& grads) {
  Eigen::VectorXd flat(parameter_count(net));
  Eigen::Index at = 0;
  auto put = [&](const auto& block) {
    flat.segment(at, block.size()) =
        Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
    at += block.size();
  };
  if (net.spec.unbiased) {
    put(grads.phase);
    put(grads.mag);
    return flat;
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    const LayerGrads& lg = grads.layers[l];
    put(lg.W);
    put(lg.b);
    if (layer.gate_W.size() > 0) {
      put(lg.gate_W);
      put(lg.gate_b);
    }
    if (layer.ln_gain.size() > 0) {
      put(lg.ln_gain);
      put(lg.ln_offset);
    }
  }
  return flat;
}

}  // namespace archprobe
