#include "doctest.h"

#include "archprobe/network.hpp"

#include <cmath>
#include <vector>

using namespace archprobe;

namespace {

Eigen::MatrixXd probe_batch() {
  Eigen::MatrixXd X(2, 5);
  X << -1.0, -0.3, 0.0, 0.4, 0.9,
        0.7, -0.8, 0.1, -0.2, 0.5;
  return X;
}

}  // namespace

TEST_CASE("glorot bound scales with fan-in and fan-out") {
  ArchSpec spec;
  spec.depth = 2;
  const Network net = init_network(spec, 31);
  // Hidden 64x64 layer: bound sqrt(6/128).
  const double s = std::sqrt(6.0 / 128.0);
  CHECK(s == doctest::Approx(0.21650635094610965).epsilon(1e-15));
  const Eigen::MatrixXd& W = net.layers[1].W;
  CHECK(W.rows() == 64);
  CHECK(W.cols() == 64);
  CHECK(W.cwiseAbs().maxCoeff() <= s);
  // 4096 uniform draws should press against the bound and center near 0.
  CHECK(W.cwiseAbs().maxCoeff() > 0.95 * s);
  CHECK(std::abs(W.mean()) < 0.02);
}

TEST_CASE("weight_scale multiplies weights only") {
  ArchSpec a, b;
  a.depth = 3;
  b.depth = 3;
  b.weight_scale = 3.0;
  const Network na = init_network(a, 7);
  const Network nb = init_network(b, 7);
  for (std::size_t l = 0; l < na.layers.size(); ++l) {
    CHECK((nb.layers[l].W - 3.0 * na.layers[l].W).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((nb.layers[l].b - na.layers[l].b).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("bias_scale bounds biases and zero silences them") {
  ArchSpec spec;
  spec.bias_scale = 0.0;
  const Network silent = init_network(spec, 9);
  for (const Layer& l : silent.layers)
    CHECK(l.b.cwiseAbs().maxCoeff() == 0.0);
  spec.bias_scale = 1.5;
  const Network loud = init_network(spec, 9);
  double top = 0.0;
  for (const Layer& l : loud.layers)
    top = std::max(top, l.b.cwiseAbs().maxCoeff());
  CHECK(top <= 1.5);
  CHECK(top > 1.0);
}

TEST_CASE("same seed same function") {
  ArchSpec spec;
  spec.activation = ActivationKind::Sine;
  spec.depth = 4;
  const Network a = init_network(spec, 1234);
  const Network b = init_network(spec, 1234);
  Eigen::VectorXd x(2);
  x << 0.3, -0.6;
  CHECK(forward(a, x) == forward(b, x));
  const Network c = init_network(spec, 1235);
  CHECK(forward(a, x) != forward(c, x));
}

TEST_CASE("relu nets are positively homogeneous in the weights") {
  ArchSpec base;
  base.depth = 2;
  base.bias_scale = 0.0;
  ArchSpec scaled = base;
  scaled.weight_scale = 2.0;
  const Network na = init_network(base, 17);
  const Network nb = init_network(scaled, 17);
  Eigen::VectorXd x(2);
  x << 0.25, -0.75;
  // Three weight layers for depth 2, so outputs scale by 2^3.
  CHECK(forward(nb, x) == doctest::Approx(8.0 * forward(na, x)).epsilon(1e-12));
}

TEST_CASE("prefactor rescales preactivations not weights") {
  ArchSpec base;
  ArchSpec pref = base;
  pref.prefactor = 2.0;
  const Network na = init_network(base, 21);
  const Network nb = init_network(pref, 21);
  for (std::size_t l = 0; l < na.layers.size(); ++l)
    CHECK((nb.layers[l].W - na.layers[l].W).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd x(2);
  x << 0.5, 0.5;
  CHECK(forward(na, x) != forward(nb, x));
}

TEST_CASE("forward_batch agrees with forward") {
  ArchSpec spec;
  spec.activation = ActivationKind::GELU;
  spec.depth = 3;
  spec.residual = true;
  const Network net = init_network(spec, 55);
  const Eigen::MatrixXd X = probe_batch();
  const Eigen::VectorXd y = forward_batch(net, X);
  for (Eigen::Index i = 0; i < X.cols(); ++i)
    CHECK(y(i) == doctest::Approx(forward(net, X.col(i))).epsilon(1e-14));
}

TEST_CASE("parameter flattening round-trips") {
  ArchSpec spec;
  spec.depth = 2;
  spec.width = 8;
  spec.gating = true;
  spec.layernorm = true;
  Network net = init_network(spec, 3);
  const Eigen::VectorXd theta = flatten_parameters(net);
  CHECK(static_cast<std::size_t>(theta.size()) == parameter_count(net));
  Eigen::VectorXd bumped = theta;
  bumped(5) += 0.125;
  unflatten_parameters(net, bumped);
  CHECK(flatten_parameters(net)(5) == bumped(5));
  CHECK((flatten_parameters(net) - bumped).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("backward_batch matches finite differences across components") {
  const ActivationKind acts[] = {ActivationKind::ReLU, ActivationKind::GELU,
                                 ActivationKind::Swish, ActivationKind::SELU,
                                 ActivationKind::TanH, ActivationKind::Gaussian,
                                 ActivationKind::Sine};
  struct Combo {
    bool residual, layernorm, gating;
  };
  const Combo combos[] = {{false, false, false},
                          {true, false, false},
                          {false, true, false},
                          {false, false, true},
                          {true, true, true}};
  const Eigen::MatrixXd X = probe_batch();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(X.cols());
  for (ActivationKind act : acts) {
    for (const Combo& combo : combos) {
      ArchSpec spec;
      spec.activation = act;
      spec.depth = 2;
      spec.width = 6;
      spec.prefactor = 1.3;
      spec.residual = combo.residual;
      spec.layernorm = combo.layernorm;
      spec.gating = combo.gating;
      Network net = init_network(spec, 77);

      ForwardCache cache;
      forward_batch(net, X, &cache);
      const Gradients grads = backward_batch(net, cache, ones);
      const Eigen::VectorXd g = flatten_gradients(net, grads);

      const Eigen::VectorXd theta = flatten_parameters(net);
      const double h = 1e-5;
      // Spot-check a spread of coordinates; full sweeps triple the runtime
      // without catching anything new.
      for (Eigen::Index i = 0; i < theta.size();
           i += std::max<Eigen::Index>(1, theta.size() / 17)) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp(i) += h;
        tm(i) -= h;
        unflatten_parameters(net, tp);
        const double up = forward_batch(net, X).sum();
        unflatten_parameters(net, tm);
        const double um = forward_batch(net, X).sum();
        unflatten_parameters(net, theta);
        const double fd = (up - um) / (2.0 * h);
        CHECK_MESSAGE(
            g(i) == doctest::Approx(fd).epsilon(1e-4).scale(1.0),
            activation_name(act) << " res=" << combo.residual
                                 << " ln=" << combo.layernorm
                                 << " gate=" << combo.gating << " theta[" << i
                                 << "]");
      }
    }
  }
}

TEST_CASE("unbiased model forward is a cosine expansion") {
  ArchSpec spec;
  spec.unbiased = true;
  spec.depth = 1;
  spec.unbiased_K = 4;
  const Network net = init_network(spec, 99);
  CHECK(net.freq.rows() == 25);
  Eigen::VectorXd x(2);
  x << 0.2, -0.4;
  double expect = 0.0;
  for (Eigen::Index r = 0; r < net.freq.rows(); ++r)
    expect += net.mag(r) * std::cos(net.freq.row(r).dot(x) + net.phase(r));
  CHECK(forward(net, x) == doctest::Approx(expect).epsilon(1e-12));
}
