#include "archprobe/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace archprobe {

namespace {

std::vector<std::uint8_t> quantize(const FunctionSample& sample) {
  if (sample.grid.dim != 2)
    throw std::invalid_argument("PGM rendering requires a d=2 sample");
  const int m = sample.grid.m;
  const auto [lo_it, hi_it] =
      std::minmax_element(sample.values.begin(), sample.values.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(m) * m);
  if (hi == lo) {
    std::fill(pixels.begin(), pixels.end(), std::uint8_t{128});
    return pixels;
  }
  const double scale = 255.0 / (hi - lo);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double v = sample.values[static_cast<std::size_t>(i) * m + j];
      const double q = std::floor((v - lo) * scale + 0.5);
      pixels[static_cast<std::size_t>(j) * m + i] =
          static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
    }
  return pixels;
}

}  // namespace

std::vector<std::uint8_t> render_pgm(const FunctionSample& sample) {
  const int m = sample.grid.m;
  const auto pixels = quantize(sample);
  char header[64];
  const int len = std::snprintf(header, sizeof header, "P5\n%d %d\n255\n", m, m);
  std::vector<std::uint8_t> bytes(header, header + len);
  bytes.insert(bytes.end(), pixels.begin(), pixels.end());
  return bytes;
}

std::vector<std::uint8_t> render_pgm_ascii(const FunctionSample& sample) {
  const int m = sample.grid.m;
  const auto pixels = quantize(sample);
  std::string text = "P2\n" + std::to_string(m) + " " + std::to_string(m) + "\n255\n";
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      text += std::to_string(pixels[static_cast<std::size_t>(j) * m + i]);
      text += i + 1 == m ? '\n' : ' ';
    }
  }
  return {text.begin(), text.end()};
}

std::vector<std::uint8_t> render_pgm_matrix(const Eigen::MatrixXd& img) {
  if (img.size() == 0)
    throw std::invalid_argument("render_pgm_matrix: empty matrix");
  const auto rows = img.rows(), cols = img.cols();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double v = img.data()[i];
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo <= hi))
    throw std::invalid_argument("render_pgm_matrix: no finite entries");
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(img.size()), 128);
  if (hi > lo) {
    const double scale = 255.0 / (hi - lo);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double v = img(r, c);
        if (!std::isfinite(v)) continue;  // NaN cells render mid-gray
        const double q = std::floor((v - lo) * scale + 0.5);
        pixels[static_cast<std::size_t>(r * cols + c)] =
            static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
      }
  }
  char header[64];
  const int len = std::snprintf(header, sizeof header, "P5\n%lld %lld\n255\n",
                                static_cast<long long>(cols),
                                static_cast<long long>(rows));
  std::vector<std::uint8_t> bytes(header, header + len);
  bytes.insert(bytes.end(), pixels.begin(), pixels.end());
  return bytes;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

namespace {

int next_token(std::istream& in) {
  // Skips whitespace and '#' comments per the PGM grammar.
  while (true) {
    const int c = in.peek();
    if (c == EOF) throw std::runtime_error("truncated PGM header");
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("malformed PGM header");
  return value;
}

}  // namespace

FunctionSample read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open PGM: " + path);
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '2'))
    throw std::runtime_error("not a PGM file: " + path);
  const bool binary = magic[1] == '5';
  const int width = next_token(in);
  const int height = next_token(in);
  const int maxval = next_token(in);
  if (width != height) throw std::runtime_error("PGM must be square: " + path);
  if (maxval != 255) throw std::runtime_error("PGM maxval must be 255: " + path);
  const int m = width;
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(m) * m);
  if (binary) {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
    if (!in) throw std::runtime_error("truncated PGM payload: " + path);
  } else {
    for (auto& p : pixels) {
      const int v = next_token(in);
      if (v < 0 || v > 255) throw std::runtime_error("PGM value out of range");
      p = static_cast<std::uint8_t>(v);
    }
  }
  FunctionSample sample;
  sample.grid = GridSpec{2, m};
  sample.values.resize(pixels.size());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      sample.values[static_cast<std::size_t>(i) * m + j] =
          static_cast<double>(pixels[static_cast<std::size_t>(j) * m + i]) / 255.0;
  sample.provenance = path;
  return sample;
}

}  // namespace archprobe
