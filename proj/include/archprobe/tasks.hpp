#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace archprobe {

// ---- modulo addition (binary classification) ----

struct ModuloTask {
  int N = 16;  // integer alphabet [0, N-1]
  int d = 2;
  int M = 10;  // modulus; smaller M = higher-frequency label pattern
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct ModuloData {
  Eigen::MatrixXd train_X;  // inputs rescaled to [-1,1] via 2x/(N-1) - 1
  Eigen::VectorXd train_y;  // 0/1 labels
  Eigen::MatrixXd test_X;
  Eigen::VectorXd test_y;
  std::vector<std::vector<int>> train_raw;  // integer tuples
  std::vector<std::vector<int>> test_raw;
};

// label = 1 iff (sum x_i mod M) <= M/2 (integer comparison 2*(s%M) <= M).
int modulo_label(const std::vector<int>& x, int M);

// Enumerates the full [0,N-1]^d grid and splits it by seed, so train and
// test partition the grid (disjoint by construction).
ModuloData gen_modulo(const ModuloTask& task);

// ---- MNIST ingestion + Colored-MNIST ----

struct IdxImages {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::vector<std::uint8_t>> pixels;  // rows*cols bytes each
};

// IDX format, big-endian magic 0x00000803 / 0x00000801.
void write_idx_images(const std::string& path, const IdxImages& images);
void write_idx_labels(const std::string& path,
                      const std::vector<std::uint8_t>& labels);
IdxImages read_idx_images(const std::string& path);
std::vector<std::uint8_t> read_idx_labels(const std::string& path);

struct MnistRaw {
  int rows = 28;
  int cols = 28;
  std::vector<std::vector<double>> images;  // pixel values scaled to [0,1]
  std::vector<int> labels;                  // 0..9
};

MnistRaw load_mnist_idx(const std::string& images_path,
                        const std::string& labels_path);

// Procedural stand-in used when the real IDX files are absent: ten fixed
// blocky glyph templates with per-example shift/intensity/noise jitter,
// classes emitted round-robin. Deterministic in seed.
void synthetic_digits(int count, std::uint64_t seed, IdxImages& images,
                      std::vector<std::uint8_t>& labels);
MnistRaw synthetic_mnist(int count, std::uint64_t seed);

enum class CmnistVariant { Train, TestDigitCorrelated, TestColorCorrelated };

// 28x28 image plus one appended color column of 28 identical values,
// flattened row-major to 28*29 = 812 inputs; label = digit/9.
struct ColoredMnistSet {
  CmnistVariant variant = CmnistVariant::Train;
  Eigen::MatrixXd X;  // n x 812
  Eigen::VectorXd y;  // labels in [0,1]
};

inline constexpr double kCmnistCorruption = 0.03;

ColoredMnistSet build_colored_mnist(const MnistRaw& raw, CmnistVariant variant,
                                    std::uint64_t seed);

// ---- coordinate-image (INR) tasks ----

struct CoordinateImageTask {
  int m = 64;
  std::vector<double> target;  // m*m values in [0,1], sample-grid order
  std::vector<int> mask;       // sorted flattened training-pixel indices
};

// image(x,y) = 0.5 + 0.25 sin(2 pi f x) + 0.25 sin(2 pi 2f y) on the
// endpoint-inclusive grid; mask = strict local extrema of the analytic
// surface (both one-dimensional curvatures of equal sign) projected to the
// nearest grid points.
CoordinateImageTask gen_waves(double f = 2.0, int m = 64);

// Mixed low/high-frequency synthetic image (smooth ramp + sharp disk and
// bar + fine stripes) with a uniform-random 40% training mask.
CoordinateImageTask gen_shapes(int m = 64, std::uint64_t seed = 0);

// Wraps an arbitrary [0,1] image (e.g. a PGM load) with a random mask.
CoordinateImageTask task_from_image(const std::vector<double>& values, int m,
                                    double mask_fraction, std::uint64_t seed);

// Training design matrix: rows are [-1,1]^2 coordinates of masked pixels.
void coordinate_training_data(const CoordinateImageTask& task,
                              Eigen::MatrixXd& X, Eigen::VectorXd& y);

// 1 - mean absolute error; 0.5 is chance against uniform labels.
double metric_regression_accuracy(const std::vector<double>& predictions,
                                  const std::vector<double>& labels);

}  // namespace archprobe
