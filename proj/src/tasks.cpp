#include "archprobe/tasks.hpp"

#include "archprobe/grid.hpp"
#include "archprobe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

namespace archprobe {

// ---- modulo ----

int modulo_label(const std::vector<int>& x, int M) {
  if (M <= 0) throw std::invalid_argument("modulo_label: M must be positive");
  long long s = 0;
  for (const int v : x) {
    if (v < 0) throw std::invalid_argument("modulo_label: negative input");
    s += v;
  }
  return 2 * static_cast<int>(s % M) <= M ? 1 : 0;
}

ModuloData gen_modulo(const ModuloTask& task) {
  if (task.N < 2 || task.d < 1)
    throw std::invalid_argument("gen_modulo: need N >= 2, d >= 1");
  if (task.train_fraction <= 0.0 || task.train_fraction >= 1.0)
    throw std::invalid_argument("gen_modulo: train_fraction must be in (0,1)");
  double total_d = std::pow(static_cast<double>(task.N), task.d);
  if (total_d > 1e6)
    throw std::invalid_argument(
        "gen_modulo: N^d too large to enumerate; reduce d");
  const auto total = static_cast<std::size_t>(total_d);

  // Odometer over [0,N-1]^d, last coordinate fastest (grid convention).
  std::vector<std::vector<int>> points(total, std::vector<int>(task.d, 0));
  std::vector<int> current(task.d, 0);
  for (std::size_t p = 0; p < total; ++p) {
    points[p] = current;
    for (int axis = task.d - 1; axis >= 0; --axis) {
      if (++current[axis] < task.N) break;
      current[axis] = 0;
    }
  }

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng::stream(task.seed, 0, StreamRole::Shuffle);
  for (std::size_t i = total; i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);

  const auto n_train = static_cast<std::size_t>(
      std::llround(task.train_fraction * static_cast<double>(total)));
  if (n_train == 0 || n_train == total)
    throw std::invalid_argument("gen_modulo: degenerate split");

  ModuloData data;
  const double denom = static_cast<double>(task.N - 1);
  auto fill = [&](const std::vector<std::size_t>& idx, Eigen::MatrixXd& X,
                  Eigen::VectorXd& y, std::vector<std::vector<int>>& raw) {
    X.resize(static_cast<Eigen::Index>(idx.size()), task.d);
    y.resize(static_cast<Eigen::Index>(idx.size()));
    raw.reserve(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const auto& pt = points[idx[r]];
      raw.push_back(pt);
      for (int c = 0; c < task.d; ++c)
        X(static_cast<Eigen::Index>(r), c) = 2.0 * pt[static_cast<std::size_t>(c)] / denom - 1.0;
      y(static_cast<Eigen::Index>(r)) = modulo_label(pt, task.M);
    }
  };
  std::vector<std::size_t> train_idx(order.begin(),
                                     order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test_idx(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                                    order.end());
  // Sorted for reproducible row order independent of the shuffle path.
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  fill(train_idx, data.train_X, data.train_y, data.train_raw);
  fill(test_idx, data.test_X, data.test_y, data.test_raw);
  return data;
}

// ---- IDX io ----

namespace {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

void put_u32_be(std::ofstream& f, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>((v >> 24) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>(v & 0xff)};
  f.write(bytes, 4);
}

std::uint32_t get_u32_be(std::ifstream& f, const std::string& path) {
  unsigned char bytes[4];
  f.read(reinterpret_cast<char*>(bytes), 4);
  if (!f) throw std::runtime_error("idx: truncated header in " + path);
  return (static_cast<std::uint32_t>(bytes[0]) << 24) |
         (static_cast<std::uint32_t>(bytes[1]) << 16) |
         (static_cast<std::uint32_t>(bytes[2]) << 8) |
         static_cast<std::uint32_t>(bytes[3]);
}

}  // namespace

void write_idx_images(const std::string& path, const IdxImages& images) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("idx: cannot open for write: " + path);
  put_u32_be(f, kIdxImagesMagic);
  put_u32_be(f, static_cast<std::uint32_t>(images.pixels.size()));
  put_u32_be(f, images.rows);
  put_u32_be(f, images.cols);
  const std::size_t expect = static_cast<std::size_t>(images.rows) * images.cols;
  for (const auto& img : images.pixels) {
    if (img.size() != expect)
      throw std::invalid_argument("idx: image size != rows*cols");
    f.write(reinterpret_cast<const char*>(img.data()),
            static_cast<std::streamsize>(img.size()));
  }
  if (!f) throw std::runtime_error("idx: write failed: " + path);
}

void write_idx_labels(const std::string& path,
                      const std::vector<std::uint8_t>& labels) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("idx: cannot open for write: " + path);
  put_u32_be(f, kIdxLabelsMagic);
  put_u32_be(f, static_cast<std::uint32_t>(labels.size()));
  f.write(reinterpret_cast<const char*>(labels.data()),
          static_cast<std::streamsize>(labels.size()));
  if (!f) throw std::runtime_error("idx: write failed: " + path);
}

IdxImages read_idx_images(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("idx: cannot open: " + path);
  const std::uint32_t magic = get_u32_be(f, path);
  if (magic != kIdxImagesMagic)
    throw std::runtime_error("idx: bad image magic in " + path);
  IdxImages out;
  const std::uint32_t count = get_u32_be(f, path);
  out.rows = get_u32_be(f, path);
  out.cols = get_u32_be(f, path);
  if (out.rows == 0 || out.cols == 0 || out.rows > 4096 || out.cols > 4096)
    throw std::runtime_error("idx: implausible dimensions in " + path);
  const std::size_t n = static_cast<std::size_t>(out.rows) * out.cols;
  out.pixels.assign(count, std::vector<std::uint8_t>(n));
  for (auto& img : out.pixels) {
    f.read(reinterpret_cast<char*>(img.data()),
           static_cast<std::streamsize>(n));
    if (!f) throw std::runtime_error("idx: truncated image data in " + path);
  }
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("idx: cannot open: " + path);
  const std::uint32_t magic = get_u32_be(f, path);
  if (magic != kIdxLabelsMagic)
    throw std::runtime_error("idx: bad label magic in " + path);
  const std::uint32_t count = get_u32_be(f, path);
  std::vector<std::uint8_t> labels(count);
  f.read(reinterpret_cast<char*>(labels.data()),
         static_cast<std::streamsize>(count));
  if (!f) throw std::runtime_error("idx: truncated label data in " + path);
  return labels;
}

MnistRaw load_mnist_idx(const std::string& images_path,
                        const std::string& labels_path) {
  const IdxImages imgs = read_idx_images(images_path);
  const std::vector<std::uint8_t> labels = read_idx_labels(labels_path);
  if (imgs.pixels.size() != labels.size())
    throw std::runtime_error("idx: image/label count mismatch");
  MnistRaw raw;
  raw.rows = static_cast<int>(imgs.rows);
  raw.cols = static_cast<int>(imgs.cols);
  raw.images.reserve(imgs.pixels.size());
  for (const auto& img : imgs.pixels) {
    std::vector<double> vals(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) vals[i] = img[i] / 255.0;
    raw.images.push_back(std::move(vals));
  }
  raw.labels.reserve(labels.size());
  for (const std::uint8_t l : labels) {
    if (l > 9) throw std::runtime_error("idx: label out of range 0..9");
    raw.labels.push_back(l);
  }
  return raw;
}

// ---- synthetic digits ----

void synthetic_digits(int count, std::uint64_t seed, IdxImages& images,
                      std::vector<std::uint8_t>& labels) {
  if (count <= 0) throw std::invalid_argument("synthetic_digits: count <= 0");
  constexpr int kSide = 28;
  constexpr int kCoarse = 7;
  constexpr int kScale = kSide / kCoarse;

  // Ten fixed coarse templates; classes must be far apart so the digit is
  // recoverable from pixels alone.
  std::vector<std::vector<bool>> templates(10,
                                           std::vector<bool>(kCoarse * kCoarse));
  for (int c = 0; c < 10; ++c) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c), StreamRole::Data);
    for (auto&& cell : templates[static_cast<std::size_t>(c)])
      cell = rng.uniform() < 0.45;
  }

  images.rows = kSide;
  images.cols = kSide;
  images.pixels.assign(static_cast<std::size_t>(count),
                       std::vector<std::uint8_t>(kSide * kSide, 0));
  labels.assign(static_cast<std::size_t>(count), 0);

  for (int idx = 0; idx < count; ++idx) {
    const int cls = idx % 10;
    labels[static_cast<std::size_t>(idx)] = static_cast<std::uint8_t>(cls);
    Rng rng = Rng::stream(seed, 1000 + static_cast<std::uint64_t>(idx),
                          StreamRole::Data);
    const double intensity = 0.6 + 0.4 * rng.uniform();
    const int dx = static_cast<int>(rng.below(5)) - 2;
    const int dy = static_cast<int>(rng.below(5)) - 2;
    auto& img = images.pixels[static_cast<std::size_t>(idx)];
    const auto& tpl = templates[static_cast<std::size_t>(cls)];
    for (int r = 0; r < kSide; ++r) {
      for (int col = 0; col < kSide; ++col) {
        const int sr = r - dy, sc = col - dx;
        double v = 0.0;
        if (sr >= 0 && sr < kSide && sc >= 0 && sc < kSide &&
            tpl[static_cast<std::size_t>((sr / kScale) * kCoarse + sc / kScale)])
          v = intensity;
        v += rng.uniform(-0.08, 0.08);
        v = std::clamp(v, 0.0, 1.0);
        img[static_cast<std::size_t>(r * kSide + col)] =
            static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    }
  }
}

MnistRaw synthetic_mnist(int count, std::uint64_t seed) {
  IdxImages images;
  std::vector<std::uint8_t> labels;
  synthetic_digits(count, seed, images, labels);
  MnistRaw raw;
  raw.rows = static_cast<int>(images.rows);
  raw.cols = static_cast<int>(images.cols);
  raw.images.reserve(images.pixels.size());
  for (const auto& img : images.pixels) {
    std::vector<double> vals(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) vals[i] = img[i] / 255.0;
    raw.images.push_back(std::move(vals));
  }
  raw.labels.assign(labels.begin(), labels.end());
  return raw;
}

// ---- colored MNIST ----

ColoredMnistSet build_colored_mnist(const MnistRaw& raw, CmnistVariant variant,
                                    std::uint64_t seed) {
  if (raw.images.empty())
    throw std::invalid_argument("build_colored_mnist: empty dataset");
  if (raw.rows != 28 || raw.cols != 28)
    throw std::invalid_argument("build_colored_mnist: expected 28x28 images");
  const auto n = static_cast<Eigen::Index>(raw.images.size());
  const int rows = raw.rows, cols = raw.cols;
  const int in_dim = rows * (cols + 1);  // appended color column

  // Per-class index pools for the digit-image replacement variant.
  std::vector<std::vector<std::size_t>> by_class(10);
  for (std::size_t i = 0; i < raw.labels.size(); ++i)
    by_class[static_cast<std::size_t>(raw.labels[i])].push_back(i);
  if (variant == CmnistVariant::TestColorCorrelated) {
    for (int c = 0; c < 10; ++c)
      if (by_class[static_cast<std::size_t>(c)].empty())
        throw std::invalid_argument(
            "build_colored_mnist: class missing for image replacement");
  }

  ColoredMnistSet set;
  set.variant = variant;
  set.X.resize(n, in_dim);
  set.y.resize(n);
  Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(variant),
                        StreamRole::Data);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double label = raw.labels[ui] / 9.0;
    const std::vector<double>* image = &raw.images[ui];
    double color = label;
    switch (variant) {
      case CmnistVariant::Train:
        if (rng.uniform() < kCmnistCorruption) color = rng.uniform();
        break;
      case CmnistVariant::TestDigitCorrelated:
        color = rng.uniform();
        break;
      case CmnistVariant::TestColorCorrelated: {
        const auto cls = rng.below(10);
        const auto& pool = by_class[static_cast<std::size_t>(cls)];
        image = &raw.images[pool[static_cast<std::size_t>(rng.below(pool.size()))]];
        break;
      }
    }
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c)
        set.X(i, r * (cols + 1) + c) = (*image)[static_cast<std::size_t>(r * cols + c)];
      set.X(i, r * (cols + 1) + cols) = color;
    }
    set.y(i) = label;
  }
  return set;
}

// ---- coordinate-image tasks ----

namespace {

constexpr double kPi = 3.14159265358979323846;

int nearest_grid_index(double x, int m) {
  // Inverse of grid_coords: x = -1 + 2i/(m-1).
  const double pos = (x + 1.0) * 0.5 * static_cast<double>(m - 1);
  const int i = static_cast<int>(std::lround(pos));
  return std::clamp(i, 0, m - 1);
}

}  // namespace

CoordinateImageTask gen_waves(double f, int m) {
  if (f <= 0.0) throw std::invalid_argument("gen_waves: f must be positive");
  if (m < 2) throw std::invalid_argument("gen_waves: m < 2");
  CoordinateImageTask task;
  task.m = m;
  const std::vector<double> coords = grid_coords(m);
  task.target.resize(static_cast<std::size_t>(m) * m);
  for (int ix = 0; ix < m; ++ix)
    for (int iy = 0; iy < m; ++iy)
      task.target[static_cast<std::size_t>(ix * m + iy)] =
          0.5 + 0.25 * std::sin(2.0 * kPi * f * coords[static_cast<std::size_t>(ix)]) +
          0.25 * std::sin(4.0 * kPi * f * coords[static_cast<std::size_t>(iy)]);

  // Analytic critical lattice: x_k = (2k+1)/(4f) with curvature sign (-1)^k,
  // y_j = (2j+1)/(8f) with sign (-1)^j. Strict extrema are the same-sign
  // pairs (opposite signs are saddles of the separable sum).
  std::set<int> mask;
  std::vector<std::pair<double, int>> xs, ys;
  for (int k = -1000; k <= 1000; ++k) {
    const double x = (2.0 * k + 1.0) / (4.0 * f);
    if (x >= -1.0 && x <= 1.0) xs.emplace_back(x, (k & 1) ? -1 : 1);
  }
  for (int j = -1000; j <= 1000; ++j) {
    const double y = (2.0 * j + 1.0) / (8.0 * f);
    if (y >= -1.0 && y <= 1.0) ys.emplace_back(y, (j & 1) ? -1 : 1);
  }
  for (const auto& [x, sx] : xs)
    for (const auto& [y, sy] : ys)
      if (sx == sy)
        mask.insert(nearest_grid_index(x, m) * m + nearest_grid_index(y, m));
  task.mask.assign(mask.begin(), mask.end());
  return task;
}

CoordinateImageTask gen_shapes(int m, std::uint64_t seed) {
  if (m < 2) throw std::invalid_argument("gen_shapes: m < 2");
  CoordinateImageTask task;
  task.m = m;
  const std::vector<double> coords = grid_coords(m);
  task.target.resize(static_cast<std::size_t>(m) * m);
  for (int ix = 0; ix < m; ++ix) {
    for (int iy = 0; iy < m; ++iy) {
      const double x = coords[static_cast<std::size_t>(ix)];
      const double y = coords[static_cast<std::size_t>(iy)];
      // Smooth base ramp.
      double v = 0.35 + 0.2 * x + 0.1 * y;
      // Sharp disk.
      const double r2 = (x + 0.35) * (x + 0.35) + (y - 0.3) * (y - 0.3);
      if (r2 < 0.09) v = 0.9;
      // Sharp dark bar.
      if (x > 0.25 && x < 0.55 && y > -0.7 && y < 0.1) v = 0.08;
      // Fine stripes in one corner.
      if (x > 0.3 && y > 0.35) v = 0.5 + 0.4 * std::sin(12.0 * kPi * y);
      task.target[static_cast<std::size_t>(ix * m + iy)] = std::clamp(v, 0.0, 1.0);
    }
  }
  const auto full = task_from_image(task.target, m, 0.4, seed);
  task.mask = full.mask;
  return task;
}

CoordinateImageTask task_from_image(const std::vector<double>& values, int m,
                                    double mask_fraction, std::uint64_t seed) {
  if (values.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m))
    throw std::invalid_argument("task_from_image: values size != m*m");
  if (mask_fraction <= 0.0 || mask_fraction > 1.0)
    throw std::invalid_argument("task_from_image: mask_fraction in (0,1]");
  CoordinateImageTask task;
  task.m = m;
  task.target = values;
  const auto total = values.size();
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::stream(seed, 1, StreamRole::Shuffle);
  for (std::size_t i = total; i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  const auto keep = static_cast<std::size_t>(
      std::llround(mask_fraction * static_cast<double>(total)));
  task.mask.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(task.mask.begin(), task.mask.end());
  return task;
}

void coordinate_training_data(const CoordinateImageTask& task,
                              Eigen::MatrixXd& X, Eigen::VectorXd& y) {
  if (task.mask.empty())
    throw std::invalid_argument("coordinate_training_data: empty mask");
  const std::vector<double> coords = grid_coords(task.m);
  X.resize(static_cast<Eigen::Index>(task.mask.size()), 2);
  y.resize(static_cast<Eigen::Index>(task.mask.size()));
  for (std::size_t r = 0; r < task.mask.size(); ++r) {
    const int idx = task.mask[r];
    const int ix = idx / task.m;
    const int iy = idx % task.m;
    X(static_cast<Eigen::Index>(r), 0) = coords[static_cast<std::size_t>(ix)];
    X(static_cast<Eigen::Index>(r), 1) = coords[static_cast<std::size_t>(iy)];
    y(static_cast<Eigen::Index>(r)) = task.target[static_cast<std::size_t>(idx)];
  }
}

double metric_regression_accuracy(const std::vector<double>& predictions,
                                  const std::vector<double>& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("metric_regression_accuracy: length mismatch");
  if (predictions.empty())
    throw std::invalid_argument("metric_regression_accuracy: empty");
  double acc = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    acc += std::abs(predictions[i] - labels[i]);
  return 1.0 - acc / static_cast<double>(predictions.size());
}

}  // namespace archprobe
