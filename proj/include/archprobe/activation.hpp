#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace archprobe {

enum class ActivationKind { ReLU, GELU, Swish, SELU, TanH, Gaussian, Sine };

// Published SELU constants; the source formula leaves them symbolic.
inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// GELU uses the exact normal CDF, not the tanh approximation.
inline double activate(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::ReLU:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::GELU:
      return x * 0.5 * (1.0 + std::erf(x * 0.7071067811865475244));
    case ActivationKind::Swish:
      return x * sigmoid(x);
    case ActivationKind::SELU:
      return x > 0.0 ? kSeluLambda * x
                     : kSeluLambda * kSeluAlpha * (std::exp(x) - 1.0);
    case ActivationKind::TanH:
      return std::tanh(x);
    case ActivationKind::Gaussian:
      return std::exp(-0.5 * x * x);
    case ActivationKind::Sine:
      return std::sin(x);
  }
  return 0.0;
}

inline double activate_grad(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::ReLU:
      return x > 0.0 ? 1.0 : 0.0;
    case ActivationKind::GELU: {
      const double cdf = 0.5 * (1.0 + std::erf(x * 0.7071067811865475244));
      const double pdf = 0.3989422804014326779 * std::exp(-0.5 * x * x);
      return cdf + x * pdf;
    }
    case ActivationKind::Swish: {
      const double s = sigmoid(x);
      return s + x * s * (1.0 - s);
    }
    case ActivationKind::SELU:
      return x > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
    case ActivationKind::TanH: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case ActivationKind::Gaussian:
      return -x * std::exp(-0.5 * x * x);
    case ActivationKind::Sine:
      return std::cos(x);
  }
  return 0.0;
}

inline const char* activation_name(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::ReLU: return "relu";
    case ActivationKind::GELU: return "gelu";
    case ActivationKind::Swish: return "swish";
    case ActivationKind::SELU: return "selu";
    case ActivationKind::TanH: return "tanh";
    case ActivationKind::Gaussian: return "gaussian";
    case ActivationKind::Sine: return "sine";
  }
  return "?";
}

inline std::optional<ActivationKind> parse_activation(std::string_view name) {
  if (name == "relu") return ActivationKind::ReLU;
  if (name == "gelu") return ActivationKind::GELU;
  if (name == "swish") return ActivationKind::Swish;
  if (name == "selu") return ActivationKind::SELU;
  if (name == "tanh") return ActivationKind::TanH;
  if (name == "gaussian") return ActivationKind::Gaussian;
  if (name == "sine") return ActivationKind::Sine;
  return std::nullopt;
}

}  // namespace archprobe
