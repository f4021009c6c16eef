#pragma once

#include <string>

#include "archprobe/activation.hpp"

namespace archprobe {

// Declarative description of a feedforward architecture. The unbiased variant
// is a one-layer sine model with a fixed integer frequency grid {0..K}^d; it
// excludes every structural flag and forces depth 1.
struct ArchSpec {
  int input_dim = 2;
  int depth = 2;
  int width = 64;
  ActivationKind activation = ActivationKind::ReLU;
  bool residual = false;
  bool layernorm = false;
  bool gating = false;
  double prefactor = 1.0;     // multiplies the activation input
  double weight_scale = 1.0;  // alpha in s = alpha * sqrt(6/(fan_in+fan_out))
  double bias_scale = 1.0;    // biases ~ U(-bias_scale, bias_scale)
  bool unbiased = false;
  int unbiased_K = 31;  // frequency grid bound; 31 = reduced-grid Nyquist at m=64

  bool operator==(const ArchSpec&) const = default;
};

// Throws std::invalid_argument on inconsistent field combinations.
void validate(const ArchSpec& spec);

// Canonical one-line identifier, e.g. "mlp-relu-d2-w64-a1.0-s1.0" or
// "unbiased-K31-a1.0-s1.0". Grammar documented in the README; round-trips
// through parse_spec.
std::string describe(const ArchSpec& spec);

// Inverse of describe. Throws std::invalid_argument on malformed input.
ArchSpec parse_spec(const std::string& id);

// Identifier-friendly float formatting: shortest form, always with a decimal
// point ("1.0", "2.5", "0.75").
std::string format_scale(double v);

}  // namespace archprobe
