#include "archprobe/transformer.hpp"

#include "archprobe/complexity.hpp"
#include "archprobe/parallel.hpp"
#include "archprobe/rng.hpp"
#include "archprobe/stats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace archprobe {

namespace {

constexpr float kLnEps = 1e-5f;

// Stream indices: 8 slots per block, embeddings far above any block count.
constexpr std::uint64_t kTokenEmbeddingStream = 1000000;
constexpr std::uint64_t kPositionEmbeddingStream = 1000001;

void fill_gaussian(Eigen::MatrixXf& m, Rng& rng, double std) {
  float* data = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i)
    data[i] = static_cast<float>(rng.gaussian() * std);
}

Eigen::RowVectorXf layernorm_row(const Eigen::RowVectorXf& x,
                                 const Eigen::VectorXf& gain,
                                 const Eigen::VectorXf& offset) {
  const float mu = x.mean();
  const Eigen::RowVectorXf centered = x.array() - mu;
  const float var = centered.squaredNorm() / static_cast<float>(x.size());
  const float inv = 1.0f / std::sqrt(var + kLnEps);
  return (centered.array() * inv * gain.transpose().array() +
          offset.transpose().array())
      .matrix();
}

void validate(const TransformerConfig& cfg) {
  if (cfg.n_layers < 0) throw std::invalid_argument("transformer: n_layers < 0");
  if (cfg.d_model <= 0 || cfg.n_heads <= 0)
    throw std::invalid_argument("transformer: bad dimensions");
  if (cfg.d_model % cfg.n_heads != 0)
    throw std::invalid_argument("transformer: d_model not divisible by n_heads");
  if (cfg.vocab_size < 2) throw std::invalid_argument("transformer: vocab < 2");
  if (cfg.context < 1) throw std::invalid_argument("transformer: context < 1");
  if (!(cfg.init_std > 0.0)) throw std::invalid_argument("transformer: bad init_std");
  if (cfg.ln_scaling < 0.0)
    throw std::invalid_argument("transformer: ln_scaling must be >= 0");
}

std::string transformer_id(const TransformerConfig& cfg) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "transformer-L%d-d%d-h%d-v%d-ctx%d-%s-g%g-s%llu",
                cfg.n_layers, cfg.d_model, cfg.n_heads, cfg.vocab_size,
                cfg.context, activation_name(cfg.mlp_activation),
                cfg.ln_scaling,
                static_cast<unsigned long long>(cfg.seed));
  return buf;
}

}  // namespace

TransformerConfig desk_transformer_config() {
  TransformerConfig cfg;
  cfg.n_layers = 6;
  cfg.d_model = 256;
  cfg.n_heads = 8;
  cfg.vocab_size = 5000;
  cfg.context = 128;
  return cfg;
}

Transformer init_transformer(const TransformerConfig& cfg) {
  validate(cfg);
  Transformer model;
  model.cfg = cfg;
  const int D = cfg.d_model;

  model.token_embedding.resize(cfg.vocab_size, D);
  {
    Rng rng = Rng::stream(cfg.seed, kTokenEmbeddingStream, StreamRole::Weights);
    fill_gaussian(model.token_embedding, rng, cfg.init_std);
  }
  model.position_embedding.resize(cfg.context, D);
  {
    Rng rng =
        Rng::stream(cfg.seed, kPositionEmbeddingStream, StreamRole::Weights);
    fill_gaussian(model.position_embedding, rng, cfg.init_std);
  }

  const auto gamma = static_cast<float>(cfg.ln_scaling);
  model.blocks.resize(static_cast<std::size_t>(cfg.n_layers));
  for (int l = 0; l < cfg.n_layers; ++l) {
    TransformerBlock& blk = model.blocks[static_cast<std::size_t>(l)];
    const auto base = static_cast<std::uint64_t>(l) * 8;
    blk.ln1_gain = Eigen::VectorXf::Constant(D, gamma);
    blk.ln1_offset = Eigen::VectorXf::Zero(D);
    blk.ln2_gain = Eigen::VectorXf::Constant(D, gamma);
    blk.ln2_offset = Eigen::VectorXf::Zero(D);

    blk.W_qkv.resize(D, 3 * D);
    Rng r0 = Rng::stream(cfg.seed, base + 0, StreamRole::Weights);
    fill_gaussian(blk.W_qkv, r0, cfg.init_std);
    blk.b_qkv = Eigen::VectorXf::Zero(3 * D);

    blk.W_attn_out.resize(D, D);
    Rng r1 = Rng::stream(cfg.seed, base + 1, StreamRole::Weights);
    fill_gaussian(blk.W_attn_out, r1, cfg.init_std);
    blk.b_attn_out = Eigen::VectorXf::Zero(D);

    blk.W_fc.resize(D, 4 * D);
    Rng r2 = Rng::stream(cfg.seed, base + 2, StreamRole::Weights);
    fill_gaussian(blk.W_fc, r2, cfg.init_std);
    blk.b_fc = Eigen::VectorXf::Zero(4 * D);

    blk.W_proj.resize(4 * D, D);
    Rng r3 = Rng::stream(cfg.seed, base + 3, StreamRole::Weights);
    fill_gaussian(blk.W_proj, r3, cfg.init_std);
    blk.b_proj = Eigen::VectorXf::Zero(D);
  }

  model.lnf_gain = Eigen::VectorXf::Constant(D, gamma);
  model.lnf_offset = Eigen::VectorXf::Zero(D);
  return model;
}

std::size_t transformer_parameter_count(const TransformerConfig& cfg) {
  validate(cfg);
  const auto D = static_cast<std::size_t>(cfg.d_model);
  const auto L = static_cast<std::size_t>(cfg.n_layers);
  return static_cast<std::size_t>(cfg.vocab_size) * D +
         static_cast<std::size_t>(cfg.context) * D +
         L * (12 * D * D + 13 * D) + 2 * D;
}

namespace {

struct KvCache {
  // One K and V buffer per block, rows = positions seen so far.
  std::vector<Eigen::MatrixXf> K, V;
  int t = 0;
};

int argmax_lowest(const Eigen::VectorXf& logits) {
  int best = 0;
  for (int i = 1; i < logits.size(); ++i)
    if (logits(i) > logits(best)) best = i;  // ties keep the lowest id
  return best;
}

// Advance one position; x is the embedded token row. Returns the logits row.
Eigen::VectorXf step_with_cache(const Transformer& model, KvCache& cache,
                                Eigen::RowVectorXf x) {
  const int D = model.cfg.d_model;
  const int H = model.cfg.n_heads;
  const int Dh = D / H;
  const float scale = 1.0f / std::sqrt(static_cast<float>(Dh));
  const int t = cache.t;

  for (std::size_t l = 0; l < model.blocks.size(); ++l) {
    const TransformerBlock& blk = model.blocks[l];
    const Eigen::RowVectorXf h = layernorm_row(x, blk.ln1_gain, blk.ln1_offset);
    const Eigen::RowVectorXf qkv = h * blk.W_qkv + blk.b_qkv.transpose();
    cache.K[l].row(t) = qkv.segment(D, D);
    cache.V[l].row(t) = qkv.segment(2 * D, D);

    Eigen::RowVectorXf attn(D);
    for (int hh = 0; hh < H; ++hh) {
      const auto q = qkv.segment(hh * Dh, Dh);
      const auto Kh = cache.K[l].block(0, hh * Dh, t + 1, Dh);
      const auto Vh = cache.V[l].block(0, hh * Dh, t + 1, Dh);
      Eigen::VectorXf scores = (Kh * q.transpose()) * scale;
      const float mx = scores.maxCoeff();
      Eigen::VectorXf w = (scores.array() - mx).exp();
      w /= w.sum();
      attn.segment(hh * Dh, Dh) = (w.transpose() * Vh).eval();
    }
    x += attn * blk.W_attn_out + blk.b_attn_out.transpose();

    const Eigen::RowVectorXf h2 = layernorm_row(x, blk.ln2_gain, blk.ln2_offset);
    Eigen::RowVectorXf hidden = h2 * blk.W_fc + blk.b_fc.transpose();
    for (Eigen::Index i = 0; i < hidden.size(); ++i)
      hidden(i) = static_cast<float>(
          activate(model.cfg.mlp_activation, static_cast<double>(hidden(i))));
    x += hidden * blk.W_proj + blk.b_proj.transpose();
  }
  cache.t = t + 1;

  const Eigen::RowVectorXf final_h =
      layernorm_row(x, model.lnf_gain, model.lnf_offset);
  return model.token_embedding * final_h.transpose();
}

}  // namespace

GeneratedSequence greedy_generate(const Transformer& model, int prompt_token,
                                  int steps) {
  const TransformerConfig& cfg = model.cfg;
  if (prompt_token < 0 || prompt_token >= cfg.vocab_size)
    throw std::invalid_argument("greedy_generate: prompt token out of vocab");
  if (steps < 1) throw std::invalid_argument("greedy_generate: steps < 1");
  if (steps + 1 > cfg.context)
    throw std::invalid_argument(
        "greedy_generate: steps + 1 exceeds context length");

  KvCache cache;
  cache.K.assign(model.blocks.size(), Eigen::MatrixXf(steps + 1, cfg.d_model));
  cache.V.assign(model.blocks.size(), Eigen::MatrixXf(steps + 1, cfg.d_model));

  GeneratedSequence out;
  out.prompt_token = prompt_token;
  out.tokens.reserve(static_cast<std::size_t>(steps));
  out.provenance = transformer_id(cfg);

  int token = prompt_token;
  for (int pos = 0; pos < steps; ++pos) {
    const Eigen::RowVectorXf x =
        model.token_embedding.row(token) + model.position_embedding.row(pos);
    const Eigen::VectorXf logits = step_with_cache(model, cache, x);
    token = argmax_lowest(logits);
    out.tokens.push_back(token);
  }
  return out;
}

Eigen::MatrixXf forward_logits(const Transformer& model,
                               const std::vector<int>& tokens) {
  const TransformerConfig& cfg = model.cfg;
  if (tokens.empty()) throw std::invalid_argument("forward_logits: empty input");
  if (static_cast<int>(tokens.size()) > cfg.context)
    throw std::invalid_argument("forward_logits: sequence exceeds context");
  const auto T = static_cast<int>(tokens.size());
  const int D = cfg.d_model;
  const int H = cfg.n_heads;
  const int Dh = D / H;
  const float scale = 1.0f / std::sqrt(static_cast<float>(Dh));

  Eigen::MatrixXf X(T, D);
  for (int tpos = 0; tpos < T; ++tpos) {
    const int tok = tokens[static_cast<std::size_t>(tpos)];
    if (tok < 0 || tok >= cfg.vocab_size)
      throw std::invalid_argument("forward_logits: token out of vocab");
    X.row(tpos) =
        model.token_embedding.row(tok) + model.position_embedding.row(tpos);
  }

  auto layernorm_rows = [](const Eigen::MatrixXf& input,
                           const Eigen::VectorXf& gain,
                           const Eigen::VectorXf& offset) {
    Eigen::MatrixXf out(input.rows(), input.cols());
    for (Eigen::Index i = 0; i < input.rows(); ++i)
      out.row(i) = layernorm_row(input.row(i), gain, offset);
    return out;
  };

  for (const TransformerBlock& blk : model.blocks) {
    const Eigen::MatrixXf h = layernorm_rows(X, blk.ln1_gain, blk.ln1_offset);
    const Eigen::MatrixXf qkv =
        (h * blk.W_qkv).rowwise() + blk.b_qkv.transpose();
    Eigen::MatrixXf attn(T, D);
    for (int hh = 0; hh < H; ++hh) {
      const Eigen::MatrixXf Q = qkv.block(0, hh * Dh, T, Dh);
      const Eigen::MatrixXf K = qkv.block(0, D + hh * Dh, T, Dh);
      const Eigen::MatrixXf V = qkv.block(0, 2 * D + hh * Dh, T, Dh);
      Eigen::MatrixXf S = (Q * K.transpose()) * scale;
      for (int i = 0; i < T; ++i) {
        for (int j = i + 1; j < T; ++j)
          S(i, j) = -std::numeric_limits<float>::infinity();
        const float mx = S.row(i).head(i + 1).maxCoeff();
        Eigen::RowVectorXf w =
            (S.row(i).head(i + 1).array() - mx).exp().matrix();
        w /= w.sum();
        attn.block(i, hh * Dh, 1, Dh) = w * V.topRows(i + 1);
      }
    }
    X += ((attn * blk.W_attn_out).rowwise() + blk.b_attn_out.transpose()).eval();

    const Eigen::MatrixXf h2 = layernorm_rows(X, blk.ln2_gain, blk.ln2_offset);
    Eigen::MatrixXf hidden = (h2 * blk.W_fc).rowwise() + blk.b_fc.transpose();
    for (Eigen::Index i = 0; i < hidden.size(); ++i)
      hidden.data()[i] = static_cast<float>(activate(
          model.cfg.mlp_activation, static_cast<double>(hidden.data()[i])));
    X += ((hidden * blk.W_proj).rowwise() + blk.b_proj.transpose()).eval();
  }

  const Eigen::MatrixXf final_h =
      layernorm_rows(X, model.lnf_gain, model.lnf_offset);
  return final_h * model.token_embedding.transpose();
}

std::vector<Eigen::MatrixXf> attention_matrices(const Transformer& model,
                                                int block,
                                                const std::vector<int>& tokens) {
  const TransformerConfig& cfg = model.cfg;
  if (block < 0 || block >= static_cast<int>(model.blocks.size()))
    throw std::invalid_argument("attention_matrices: block out of range");
  if (tokens.empty() || static_cast<int>(tokens.size()) > cfg.context)
    throw std::invalid_argument("attention_matrices: bad sequence length");
  const auto T = static_cast<int>(tokens.size());
  const int D = cfg.d_model;
  const int H = cfg.n_heads;
  const int Dh = D / H;
  const float scale = 1.0f / std::sqrt(static_cast<float>(Dh));

  Eigen::MatrixXf X(T, D);
  for (int tpos = 0; tpos < T; ++tpos)
    X.row(tpos) = model.token_embedding.row(tokens[static_cast<std::size_t>(tpos)]) +
                  model.position_embedding.row(tpos);

  for (int l = 0; l < block; ++l) {
    // Advance through earlier blocks with the full forward recurrence.
    const TransformerBlock& blk = model.blocks[static_cast<std::size_t>(l)];
    Eigen::MatrixXf h(T, D);
    for (int i = 0; i < T; ++i)
      h.row(i) = layernorm_row(X.row(i), blk.ln1_gain, blk.ln1_offset);
    const Eigen::MatrixXf qkv = (h * blk.W_qkv).rowwise() + blk.b_qkv.transpose();
    Eigen::MatrixXf attn(T, D);
    for (int hh = 0; hh < H; ++hh) {
      const Eigen::MatrixXf Q = qkv.block(0, hh * Dh, T, Dh);
      const Eigen::MatrixXf K = qkv.block(0, D + hh * Dh, T, Dh);
      const Eigen::MatrixXf V = qkv.block(0, 2 * D + hh * Dh, T, Dh);
      for (int i = 0; i < T; ++i) {
        Eigen::RowVectorXf s = (Q.row(i) * K.topRows(i + 1).transpose()) * scale;
        const float mx = s.maxCoeff();
        Eigen::RowVectorXf w = (s.array() - mx).exp().matrix();
        w /= w.sum();
        attn.block(i, hh * Dh, 1, Dh) = w * V.topRows(i + 1);
      }
    }
    X += ((attn * blk.W_attn_out).rowwise() + blk.b_attn_out.transpose()).eval();
    Eigen::MatrixXf h2(T, D);
    for (int i = 0; i < T; ++i)
      h2.row(i) = layernorm_row(X.row(i), blk.ln2_gain, blk.ln2_offset);
    Eigen::MatrixXf hidden = (h2 * blk.W_fc).rowwise() + blk.b_fc.transpose();
    for (Eigen::Index i = 0; i < hidden.size(); ++i)
      hidden.data()[i] = static_cast<float>(activate(
          model.cfg.mlp_activation, static_cast<double>(hidden.data()[i])));
    X += ((hidden * blk.W_proj).rowwise() + blk.b_proj.transpose()).eval();
  }

  const TransformerBlock& blk = model.blocks[static_cast<std::size_t>(block)];
  Eigen::MatrixXf h(T, D);
  for (int i = 0; i < T; ++i)
    h.row(i) = layernorm_row(X.row(i), blk.ln1_gain, blk.ln1_offset);
  const Eigen::MatrixXf qkv = (h * blk.W_qkv).rowwise() + blk.b_qkv.transpose();
  std::vector<Eigen::MatrixXf> mats;
  mats.reserve(static_cast<std::size_t>(H));
  for (int hh = 0; hh < H; ++hh) {
    const Eigen::MatrixXf Q = qkv.block(0, hh * Dh, T, Dh);
    const Eigen::MatrixXf K = qkv.block(0, D + hh * Dh, T, Dh);
    Eigen::MatrixXf A = Eigen::MatrixXf::Zero(T, T);
    for (int i = 0; i < T; ++i) {
      Eigen::RowVectorXf s = (Q.row(i) * K.topRows(i + 1).transpose()) * scale;
      const float mx = s.maxCoeff();
      Eigen::RowVectorXf w = (s.array() - mx).exp().matrix();
      w /= w.sum();
      A.row(i).head(i + 1) = w;
    }
    mats.push_back(std::move(A));
  }
  return mats;
}

namespace {

TransformerConfig apply_axis(const TransformerConfig& base, TransformerAxis axis,
                             const std::string& value) {
  TransformerConfig cfg = base;
  switch (axis) {
    case TransformerAxis::Activation: {
      const auto kind = parse_activation(value);
      if (!kind)
        throw std::invalid_argument(
            "sequence_complexity_sweep: unknown activation '" + value + "'");
      cfg.mlp_activation = *kind;
      break;
    }
    case TransformerAxis::Depth:
      cfg.n_layers = std::stoi(value);
      break;
    case TransformerAxis::LnScaling:
      cfg.ln_scaling = std::stod(value);
      break;
  }
  return cfg;
}

}  // namespace

std::vector<TransformerCell> sequence_complexity_sweep(
    const TransformerConfig& base, TransformerAxis axis,
    const std::vector<std::string>& values, int n_sequences, int jobs) {
  if (values.empty())
    throw std::invalid_argument("sequence_complexity_sweep: no axis values");
  if (n_sequences < 1)
    throw std::invalid_argument("sequence_complexity_sweep: n_sequences < 1");

  std::vector<TransformerConfig> cfgs;
  cfgs.reserve(values.size());
  std::vector<TransformerCell> cells(values.size());
  for (std::size_t ci = 0; ci < values.size(); ++ci) {
    cfgs.push_back(apply_axis(base, axis, values[ci]));
    validate(cfgs.back());
    cells[ci].axis_value = values[ci];
    cells[ci].lz.assign(static_cast<std::size_t>(n_sequences), 0);
  }

  const std::size_t total = values.size() * static_cast<std::size_t>(n_sequences);
  parallel_for(total, jobs, [&](std::size_t task) {
    const std::size_t ci = task / static_cast<std::size_t>(n_sequences);
    const std::size_t si = task % static_cast<std::size_t>(n_sequences);
    TransformerConfig cfg = cfgs[ci];
    cfg.seed = derive_seed(base.seed, task);
    const Transformer model = init_transformer(cfg);
    const GeneratedSequence seq = greedy_generate(model, /*prompt_token=*/0);
    cells[ci].lz[si] = lz78_dictionary_size(seq.tokens);
  });

  for (auto& cell : cells) {
    std::vector<double> vals(cell.lz.begin(), cell.lz.end());
    cell.mean = mean(vals);
    cell.stddev = sample_std(vals);
  }
  return cells;
}

TransformerCell iid_uniform_control(int length, int vocab_size,
                                    int n_sequences, std::uint64_t seed) {
  if (length < 1 || vocab_size < 2 || n_sequences < 1)
    throw std::invalid_argument("iid_uniform_control: bad arguments");
  TransformerCell cell;
  cell.axis_value = "iid-uniform";
  cell.lz.reserve(static_cast<std::size_t>(n_sequences));
  for (int s = 0; s < n_sequences; ++s) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(s), StreamRole::Data);
    std::vector<int> ids(static_cast<std::size_t>(length));
    for (auto& id : ids)
      id = static_cast<int>(rng.below(static_cast<std::uint64_t>(vocab_size)));
    cell.lz.push_back(lz78_dictionary_size(ids));
  }
  std::vector<double> vals(cell.lz.begin(), cell.lz.end());
  cell.mean = mean(vals);
  cell.stddev = sample_std(vals);
  return cell;
}

}  // namespace archprobe
