#include "archprobe/archspec.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace archprobe {

void validate(const ArchSpec& spec) {
  if (spec.input_dim < 1) throw std::invalid_argument("input_dim must be positive");
  if (spec.depth < 1) throw std::invalid_argument("depth must be positive");
  if (spec.width < 1) throw std::invalid_argument("width must be positive");
  if (!(spec.prefactor > 0.0)) throw std::invalid_argument("prefactor must be positive");
  if (!(spec.weight_scale > 0.0)) throw std::invalid_argument("weight_scale must be positive");
  if (spec.bias_scale < 0.0) throw std::invalid_argument("bias_scale must be nonnegative");
  if (spec.unbiased) {
    if (spec.residual || spec.layernorm || spec.gating)
      throw std::invalid_argument("unbiased variant excludes residual/layernorm/gating");
    if (spec.unbiased_K < 1) throw std::invalid_argument("unbiased_K must be positive");
  }
}

std::string format_scale(double v) {
  char buf[32];
  // Shortest representation that round-trips through strtod.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s(buf);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::string describe(const ArchSpec& spec) {
  validate(spec);
  std::string id;
  if (spec.unbiased) {
    id = "unbiased-K" + std::to_string(spec.unbiased_K);
  } else {
    id = "mlp-";
    id += activation_name(spec.activation);
    id += "-d" + std::to_string(spec.depth);
    id += "-w" + std::to_string(spec.width);
  }
  id += "-a" + format_scale(spec.prefactor);
  id += "-s" + format_scale(spec.weight_scale);
  if (spec.bias_scale != 1.0) id += "-b" + format_scale(spec.bias_scale);
  if (spec.input_dim != 2) id += "-i" + std::to_string(spec.input_dim);
  if (!spec.unbiased) {
    if (spec.residual) id += "-res";
    if (spec.layernorm) id += "-ln";
    if (spec.gating) id += "-gate";
  }
  return id;
}

namespace {

std::vector<std::string> split_dashes(const std::string& id) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= id.size()) {
    const std::size_t pos = id.find('-', start);
    if (pos == std::string::npos) {
      parts.push_back(id.substr(start));
      break;
    }
    parts.push_back(id.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

int parse_int(const std::string& tok, const char* what) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0')
    throw std::invalid_argument(std::string("bad ") + what + " in identifier: " + tok);
  return static_cast<int>(v);
}

double parse_real(const std::string& tok, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw std::invalid_argument(std::string("bad ") + what + " in identifier: " + tok);
  return v;
}

}  // namespace

ArchSpec parse_spec(const std::string& id) {
  const auto parts = split_dashes(id);
  if (parts.empty()) throw std::invalid_argument("empty identifier");
  ArchSpec spec;
  std::size_t i = 0;
  if (parts[0] == "unbiased") {
    spec.unbiased = true;
    spec.depth = 1;
    i = 1;
    if (i >= parts.size() || parts[i].empty() || parts[i][0] != 'K')
      throw std::invalid_argument("unbiased identifier requires K field");
    spec.unbiased_K = parse_int(parts[i].substr(1), "K");
    ++i;
  } else if (parts[0] == "mlp") {
    if (parts.size() < 4) throw std::invalid_argument("truncated identifier: " + id);
    const auto act = parse_activation(parts[1]);
    if (!act) throw std::invalid_argument("unknown activation: " + parts[1]);
    spec.activation = *act;
    if (parts[2].empty() || parts[2][0] != 'd')
      throw std::invalid_argument("expected depth field: " + parts[2]);
    spec.depth = parse_int(parts[2].substr(1), "depth");
    if (parts[3].empty() || parts[3][0] != 'w')
      throw std::invalid_argument("expected width field: " + parts[3]);
    spec.width = parse_int(parts[3].substr(1), "width");
    i = 4;
  } else {
    throw std::invalid_argument("unknown identifier family: " + parts[0]);
  }
  for (; i < parts.size(); ++i) {
    const std::string& tok = parts[i];
    if (tok == "res") {
      spec.residual = true;
    } else if (tok == "ln") {
      spec.layernorm = true;
    } else if (tok == "gate") {
      spec.gating = true;
    } else if (!tok.empty() && tok[0] == 'a') {
      spec.prefactor = parse_real(tok.substr(1), "prefactor");
    } else if (!tok.empty() && tok[0] == 's') {
      spec.weight_scale = parse_real(tok.substr(1), "weight_scale");
    } else if (!tok.empty() && tok[0] == 'b') {
      spec.bias_scale = parse_real(tok.substr(1), "bias_scale");
    } else if (!tok.empty() && tok[0] == 'i') {
      spec.input_dim = parse_int(tok.substr(1), "input_dim");
    } else {
      throw std::invalid_argument("unknown identifier token: " + tok);
    }
  }
  validate(spec);
  return spec;
}

}  // namespace archprobe
