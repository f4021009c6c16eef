#include "doctest.h"

#include "archprobe/activation.hpp"

#include <cmath>
#include <string>

using namespace archprobe;

namespace {

constexpr ActivationKind kAll[] = {
    ActivationKind::ReLU, ActivationKind::GELU,     ActivationKind::Swish,
    ActivationKind::SELU, ActivationKind::TanH,     ActivationKind::Gaussian,
    ActivationKind::Sine};

}  // namespace

TEST_CASE("pointwise activation values") {
  CHECK(activate(ActivationKind::ReLU, -1.0) == 0.0);
  CHECK(activate(ActivationKind::ReLU, 2.5) == 2.5);
  CHECK(activate(ActivationKind::TanH, 0.5) ==
        doctest::Approx(0.46211715726000974).epsilon(1e-14));
  CHECK(activate(ActivationKind::Gaussian, 0.0) == 1.0);
  CHECK(activate(ActivationKind::Gaussian, 2.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(activate(ActivationKind::Sine, 1.0) ==
        doctest::Approx(std::sin(1.0)).epsilon(1e-14));
  CHECK(activate(ActivationKind::GELU, 0.0) == 0.0);
  // GELU approaches identity for large positive inputs.
  CHECK(activate(ActivationKind::GELU, 8.0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(activate(ActivationKind::Swish, 0.0) == 0.0);
  CHECK(activate(ActivationKind::SELU, 0.0) == 0.0);
  CHECK(activate(ActivationKind::SELU, 1.0) ==
        doctest::Approx(kSeluLambda).epsilon(1e-14));
  // Negative saturation tends to -lambda*alpha.
  CHECK(activate(ActivationKind::SELU, -40.0) ==
        doctest::Approx(-kSeluLambda * kSeluAlpha).epsilon(1e-12));
}

TEST_CASE("sigmoid midpoint and symmetry") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(3.0) + sigmoid(-3.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gradients match central differences") {
  const double h = 1e-6;
  const double pts[] = {-2.3, -1.0, -0.4, 0.1, 0.9, 1.7, 3.2};
  for (ActivationKind kind : kAll) {
    for (double x : pts) {
      // ReLU kink at 0 is excluded by the probe points.
      const double fd =
          (activate(kind, x + h) - activate(kind, x - h)) / (2.0 * h);
      CHECK_MESSAGE(
          activate_grad(kind, x) == doctest::Approx(fd).epsilon(1e-4),
          activation_name(kind) << " at x=" << x);
    }
  }
}

TEST_CASE("names round-trip through the parser") {
  for (ActivationKind kind : kAll) {
    const std::string name = activation_name(kind);
    const auto parsed = parse_activation(name);
    REQUIRE(parsed.has_value());
    CHECK(*parsed == kind);
  }
  CHECK_FALSE(parse_activation("softplus").has_value());
  CHECK_FALSE(parse_activation("").has_value());
}
