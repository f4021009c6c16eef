#pragma once

#include "archprobe/activation.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace archprobe {

// GPT-2-family decoder: pre-layernorm blocks, learned positions, tied
// embeddings. Defaults mirror GPT-2 small; desk_transformer_config() is the
// reduced configuration the experiments and the acceptance gate run on.
struct TransformerConfig {
  int n_layers = 12;
  int d_model = 768;
  int n_heads = 12;
  int vocab_size = 50257;
  int context = 1024;
  ActivationKind mlp_activation = ActivationKind::GELU;
  double ln_scaling = 1.0;  // layernorm gain at init
  double init_std = 0.02;
  std::uint64_t seed = 0;
};

TransformerConfig desk_transformer_config();

// Single-precision parameters: random-init probing needs no double math and
// the 1000-sequence sweeps are memory-bound.
struct TransformerBlock {
  Eigen::VectorXf ln1_gain, ln1_offset;
  Eigen::MatrixXf W_qkv;  // d_model x 3*d_model
  Eigen::VectorXf b_qkv;
  Eigen::MatrixXf W_attn_out;  // d_model x d_model
  Eigen::VectorXf b_attn_out;
  Eigen::VectorXf ln2_gain, ln2_offset;
  Eigen::MatrixXf W_fc;  // d_model x 4*d_model
  Eigen::VectorXf b_fc;
  Eigen::MatrixXf W_proj;  // 4*d_model x d_model
  Eigen::VectorXf b_proj;
};

struct Transformer {
  TransformerConfig cfg;
  Eigen::MatrixXf token_embedding;     // vocab x d_model (also unembedding)
  Eigen::MatrixXf position_embedding;  // context x d_model
  std::vector<TransformerBlock> blocks;
  Eigen::VectorXf lnf_gain, lnf_offset;
};

// All weights N(0, init_std^2), biases 0, layernorm gain = ln_scaling,
// offset 0. No residual-depth rescaling of the init. Deterministic by seed.
Transformer init_transformer(const TransformerConfig& cfg);

// V*D + ctx*D + L*(12 D^2 + 13 D) + 2D (tied unembedding adds nothing).
std::size_t transformer_parameter_count(const TransformerConfig& cfg);

struct GeneratedSequence {
  int prompt_token = 0;
  std::vector<int> tokens;  // exactly `steps` post-prompt ids
  std::string provenance;
};

// Greedy argmax decode with a KV cache; ties break toward the lowest id.
// Requires steps + 1 <= cfg.context.
GeneratedSequence greedy_generate(const Transformer& model, int prompt_token,
                                  int steps = 100);

// Logits for a full token sequence (no cache); row t depends only on tokens
// 0..t. Used by the causality and attention property tests.
Eigen::MatrixXf forward_logits(const Transformer& model,
                               const std::vector<int>& tokens);

// Row-stochastic attention matrices of one block evaluated on a sequence,
// one matrix per head.
std::vector<Eigen::MatrixXf> attention_matrices(const Transformer& model,
                                                int block,
                                                const std::vector<int>& tokens);

enum class TransformerAxis { Activation, Depth, LnScaling };

struct TransformerCell {
  std::string axis_value;
  std::vector<int> lz;  // per-sequence LZ78 dictionary size
  double mean = 0.0;
  double stddev = 0.0;
};

// For each axis value: n_sequences freshly initialized models (seed derived
// from cfg.seed and the sequence index), one greedy sequence each, LZ78 on
// the raw token ids. Deterministic result for any jobs count.
std::vector<TransformerCell> sequence_complexity_sweep(
    const TransformerConfig& base, TransformerAxis axis,
    const std::vector<std::string>& values, int n_sequences, int jobs = 1);

// Mean/std LZ78 of iid-uniform token sequences, the control distribution
// generated sequences are compared against.
TransformerCell iid_uniform_control(int length, int vocab_size,
                                    int n_sequences, std::uint64_t seed);

}  // namespace archprobe
