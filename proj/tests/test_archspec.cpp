#include "doctest.h"

#include "archprobe/archspec.hpp"

#include <stdexcept>

using namespace archprobe;

TEST_CASE("default spec describes to the canonical mlp id") {
  ArchSpec spec;
  CHECK(describe(spec) == "mlp-relu-d2-w64-a1.0-s1.0");
}

TEST_CASE("describe/parse round-trips") {
  ArchSpec spec;
  spec.activation = ActivationKind::Gaussian;
  spec.depth = 5;
  spec.width = 128;
  spec.prefactor = 2.5;
  spec.weight_scale = 0.5;
  spec.bias_scale = 0.0;
  spec.input_dim = 3;
  spec.residual = true;
  spec.layernorm = true;
  spec.gating = true;
  const std::string id = describe(spec);
  CHECK(id == "mlp-gaussian-d5-w128-a2.5-s0.5-b0.0-i3-res-ln-gate");
  const ArchSpec back = parse_spec(id);
  CHECK(back.activation == spec.activation);
  CHECK(back.depth == spec.depth);
  CHECK(back.width == spec.width);
  CHECK(back.prefactor == spec.prefactor);
  CHECK(back.weight_scale == spec.weight_scale);
  CHECK(back.bias_scale == spec.bias_scale);
  CHECK(back.input_dim == spec.input_dim);
  CHECK(back.residual);
  CHECK(back.layernorm);
  CHECK(back.gating);
  CHECK(describe(back) == id);
}

TEST_CASE("unbiased spec round-trips with K field") {
  ArchSpec spec;
  spec.unbiased = true;
  spec.depth = 1;
  spec.unbiased_K = 31;
  spec.weight_scale = 3.0;
  const std::string id = describe(spec);
  CHECK(id == "unbiased-K31-a1.0-s3.0");
  const ArchSpec back = parse_spec(id);
  CHECK(back.unbiased);
  CHECK(back.unbiased_K == 31);
  CHECK(back.weight_scale == 3.0);
}

TEST_CASE("scale formatting is shortest round-trip with a decimal point") {
  CHECK(format_scale(1.0) == "1.0");
  CHECK(format_scale(0.5) == "0.5");
  CHECK(format_scale(6.0) == "6.0");
  CHECK(format_scale(0.1) == "0.1");
  // Non-representable decimal keeps enough digits to round-trip exactly.
  const double awkward = 1.0 / 3.0;
  CHECK(parse_spec("mlp-relu-d1-w8-a1.0-s" + format_scale(awkward))
            .weight_scale == awkward);
}

TEST_CASE("validate rejects malformed specs") {
  ArchSpec spec;
  spec.depth = 0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = ArchSpec{};
  spec.width = 0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = ArchSpec{};
  spec.weight_scale = 0.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = ArchSpec{};
  spec.prefactor = -1.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = ArchSpec{};
  spec.bias_scale = -0.5;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = ArchSpec{};
  spec.unbiased = true;
  spec.residual = true;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = ArchSpec{};
  spec.unbiased = true;
  spec.unbiased_K = 0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

TEST_CASE("parser rejects malformed identifiers") {
  CHECK_THROWS_AS(parse_spec(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("cnn-relu-d2-w64"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("mlp-relu"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("mlp-softmax-d2-w64"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("mlp-relu-x2-w64"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("mlp-relu-d2-w64-q1.0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("mlp-relu-d2-w64-sbogus"), std::invalid_argument);
  CHECK_THROWS_AS(parse_spec("unbiased-a1.0"), std::invalid_argument);
  // Parsed specs still go through validation.
  CHECK_THROWS_AS(parse_spec("mlp-relu-d0-w64"), std::invalid_argument);
}
