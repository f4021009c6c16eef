#pragma once

#include <Eigen/Dense>
#include <vector>

#include "archprobe/grid.hpp"

namespace archprobe {

enum class Measure { Fourier, Chebyshev, Legendre, LZ };

const char* measure_name(Measure measure);

// The Hann window suppresses the spectral-leakage baseline of nonperiodic
// samples; the default (None) keeps pure-tone bins exact. Experiment
// pipelines pass Hann and record it in their output metadata.
enum class Window { None, Hann };

enum class PolyBasis { Chebyshev, Legendre, Hermite };

struct ComplexityScore {
  Measure measure = Measure::Fourier;
  double raw = 0.0;
  double normalized = 0.0;
  int grid_m = 0;   // grid points per axis (Fourier/poly) or sequence length (LZ)
  int levels = 0;   // LZ discretization levels
  Window window = Window::None;
};

// One-sided folded magnitude spectrum. The duplicated periodic endpoint of the
// endpoint-inclusive grid is dropped, giving n = m-1 points per axis; each
// frequency pair (a, n-a) folds into bin min(a, n-a), so bins run 0..n/2.
struct Spectrum {
  int dim = 0;
  int n = 0;      // reduced points per axis
  int bins = 0;   // n/2 + 1 per axis
  std::vector<double> magnitudes;  // bins^dim, row-major, last axis fastest
  std::vector<double> freq_norm;   // ||k||_2 per bin
  double parseval_rel_err = 0.0;   // |sum|f|^2 - sum|F|^2/n^d| / sum|f|^2
};

struct FourierResult {
  ComplexityScore score;
  Spectrum spectrum;
};

// C = sum |F(k)| * ||k|| / sum |F(k)| over folded bins, DC excluded.
// Total non-DC mass below 1e-12 (a constant function) scores 0.
FourierResult fourier_complexity(const FunctionSample& sample,
                                 Window window = Window::None);

// Coefficients of a weighted least-squares projection onto the basis,
// computed on the grid with 3 points omitted per side. coeffs is
// (N+1)^d-shaped with zeros beyond the retained order, which is the largest
// leading block of the design matrix with condition number <= 1e2; on the
// 64-point grid this keeps orders through ~11, enough for the degree-10
// reconstruction guarantee while keeping coefficients of non-polynomial
// samples free of ill-conditioned fitting artifacts.
struct PolySpectrum {
  PolyBasis basis = PolyBasis::Chebyshev;
  int max_order = 100;
  int retained = 0;  // retained orders are 0..retained-1
  Eigen::MatrixXd coeffs;  // (N+1) x (N+1); for d=1 only column 0 is used
};

struct PolyResult {
  ComplexityScore score;
  PolySpectrum spectrum;
};

PolyResult poly_complexity(const FunctionSample& sample, PolyBasis basis,
                           int N = 100);

// LZ78 phrase-dictionary size of the discretized value stream. In traversal
// mode the successive differences of the discretized values are parsed
// instead. Integer token streams skip discretization via lz78_dictionary_size.
ComplexityScore lz_complexity(const std::vector<double>& values,
                              int levels = 10, bool traversal_mode = false);

// Longest-match-then-extend parse; the dictionary counts inserted phrases
// and a trailing fragment that matches an existing phrase is uncounted.
int lz78_dictionary_size(const std::vector<int>& symbols);

// Equal bins spanning [min,max], half-open except the last; a constant
// sample maps to all zeros.
std::vector<int> discretize(const std::vector<double>& values, int levels);

// Min-max rescaling of raw scores within the batch, independently per
// measure; an all-equal batch normalizes to 0.
void normalize_scores(std::vector<ComplexityScore>& batch);

}  // namespace archprobe
