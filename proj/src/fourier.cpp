#include <cmath>
#include <complex>
#include <stdexcept>

#include "archprobe/complexity.hpp"

namespace archprobe {

const char* measure_name(Measure measure) {
  switch (measure) {
    case Measure::Fourier: return "fourier";
    case Measure::Chebyshev: return "chebyshev";
    case Measure::Legendre: return "legendre";
    case Measure::LZ: return "lz";
  }
  return "?";
}

namespace {

constexpr double kPi = 3.14159265358979323846;
using cd = std::complex<double>;

// Mixed-radix Cooley-Tukey DFT, O(n log n) for composite n with a naive
// O(p^2) base case on prime factors. Exact enough for the small fixed grid
// sizes used here and fully deterministic.
void dft_recurse(const cd* in, cd* out, int n, int stride, const std::vector<cd>& twiddle,
                 int twiddle_stride) {
  int p = 0;
  for (int f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      p = f;
      break;
    }
  }
  if (p == 0) {
    // Prime length: direct evaluation.
    for (int k = 0; k < n; ++k) {
      cd acc = 0.0;
      for (int j = 0; j < n; ++j)
        acc += in[j * stride] * twiddle[static_cast<std::size_t>(j) * k % n * twiddle_stride];
      out[k] = acc;
    }
    return;
  }
  const int q = n / p;
  // n = p*q: q sub-DFTs of length p are combined with twiddles into p DFTs of
  // length q. Scratch holds the column transforms.
  std::vector<cd> scratch(static_cast<std::size_t>(n));
  std::vector<cd> col(static_cast<std::size_t>(p));
  for (int r = 0; r < q; ++r) {
    dft_recurse(in + r * stride, col.data(), p, q * stride, twiddle,
                twiddle_stride * q);
    for (int s = 0; s < p; ++s)
      scratch[static_cast<std::size_t>(s) * q + r] =
          col[s] * twiddle[static_cast<std::size_t>(s) * r % n * twiddle_stride];
  }
  std::vector<cd> row(static_cast<std::size_t>(q));
  for (int s = 0; s < p; ++s) {
    dft_recurse(scratch.data() + static_cast<std::size_t>(s) * q, row.data(), q, 1,
                twiddle, twiddle_stride * p);
    for (int t = 0; t < q; ++t) out[t * p + s] = row[t];
  }
}

void dft(std::vector<cd>& data) {
  const int n = static_cast<int>(data.size());
  if (n <= 1) return;
  std::vector<cd> twiddle(n);
  for (int j = 0; j < n; ++j) {
    const double a = -2.0 * kPi * j / n;
    twiddle[j] = cd(std::cos(a), std::sin(a));
  }
  std::vector<cd> out(n);
  dft_recurse(data.data(), out.data(), n, 1, twiddle, 1);
  data.swap(out);
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j)
    w[j] = 0.5 - 0.5 * std::cos(2.0 * kPi * j / n);
  return w;
}

}  // namespace

FourierResult fourier_complexity(const FunctionSample& sample, Window window) {
  const int d = sample.grid.dim;
  const int m = sample.grid.m;
  if (d != 1 && d != 2)
    throw std::invalid_argument("fourier_complexity requires d in {1,2}");
  if (m < 3) throw std::invalid_argument("grid too small for a spectrum");
  // Drop the duplicated periodic endpoint so integer cycles-per-domain
  // content lands exactly on integer bins.
  const int n = m - 1;
  const std::vector<double> w =
      window == Window::Hann ? hann_window(n) : std::vector<double>(n, 1.0);

  double sample_power = 0.0;
  std::vector<cd> field;
  if (d == 1) {
    field.resize(n);
    for (int i = 0; i < n; ++i) {
      const double v = sample.values[static_cast<std::size_t>(i)] * w[i];
      field[i] = v;
      sample_power += v * v;
    }
    dft(field);
  } else {
    field.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double v =
            sample.values[static_cast<std::size_t>(i) * m + j] * w[i] * w[j];
        field[static_cast<std::size_t>(i) * n + j] = v;
        sample_power += v * v;
      }
    // Rows, then columns.
    std::vector<cd> line(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) line[j] = field[static_cast<std::size_t>(i) * n + j];
      dft(line);
      for (int j = 0; j < n; ++j) field[static_cast<std::size_t>(i) * n + j] = line[j];
    }
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) line[i] = field[static_cast<std::size_t>(i) * n + j];
      dft(line);
      for (int i = 0; i < n; ++i) field[static_cast<std::size_t>(i) * n + j] = line[i];
    }
  }

  double spectrum_power = 0.0;
  for (const cd& v : field) spectrum_power += std::norm(v);
  spectrum_power /= std::pow(static_cast<double>(n), d);

  Spectrum spec;
  spec.dim = d;
  spec.n = n;
  spec.bins = n / 2 + 1;
  spec.parseval_rel_err =
      sample_power > 0.0
          ? std::abs(sample_power - spectrum_power) / sample_power
          : std::abs(spectrum_power);

  const int bins = spec.bins;
  auto fold = [n](int a) { return a <= n - a ? a : n - a; };
  if (d == 1) {
    spec.magnitudes.assign(bins, 0.0);
    spec.freq_norm.resize(bins);
    for (int a = 0; a < n; ++a)
      spec.magnitudes[fold(a)] += std::abs(field[static_cast<std::size_t>(a)]);
    for (int a = 0; a < bins; ++a) spec.freq_norm[a] = a;
  } else {
    spec.magnitudes.assign(static_cast<std::size_t>(bins) * bins, 0.0);
    spec.freq_norm.resize(static_cast<std::size_t>(bins) * bins);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        spec.magnitudes[static_cast<std::size_t>(fold(a)) * bins + fold(b)] +=
            std::abs(field[static_cast<std::size_t>(a) * n + b]);
    for (int a = 0; a < bins; ++a)
      for (int b = 0; b < bins; ++b)
        spec.freq_norm[static_cast<std::size_t>(a) * bins + b] =
            std::sqrt(static_cast<double>(a) * a + static_cast<double>(b) * b);
  }

  double mass = 0.0, weighted = 0.0;
  for (std::size_t i = 1; i < spec.magnitudes.size(); ++i) {
    // Index 0 is the DC bin in both layouts.
    mass += spec.magnitudes[i];
    weighted += spec.magnitudes[i] * spec.freq_norm[i];
  }
  FourierResult result;
  result.spectrum = std::move(spec);
  result.score.measure = Measure::Fourier;
  result.score.raw = mass < 1e-12 ? 0.0 : weighted / mass;
  result.score.normalized = 0.0;
  result.score.grid_m = m;
  result.score.window = window;
  return result;
}

}  // namespace archprobe
