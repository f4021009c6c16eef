#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "archprobe/complexity.hpp"

namespace archprobe {

namespace {

constexpr int kOmitPerSide = 3;
// Orders past the well-conditioned block carry least-squares artifacts for
// out-of-span samples (kinked activations) large enough to dominate the
// order-weighted mean, so the cap is deliberately strict. 1e2 retains orders
// through ~11 on the 58-point grid, covering the degree-10 reconstruction
// guarantee with headroom of several orders of magnitude.
constexpr double kConditionCap = 1e2;

// Basis values by recurrence, orders 0..P, at the given points.
// Chebyshev T, Legendre P, physicists' Hermite H.
Eigen::MatrixXd basis_matrix(const std::vector<double>& x, int P, PolyBasis basis) {
  const int npt = static_cast<int>(x.size());
  Eigen::MatrixXd B(npt, P + 1);
  for (int i = 0; i < npt; ++i) {
    const double xi = x[i];
    B(i, 0) = 1.0;
    if (P >= 1)
      B(i, 1) = basis == PolyBasis::Hermite ? 2.0 * xi : xi;
    for (int p = 1; p < P; ++p) {
      switch (basis) {
        case PolyBasis::Chebyshev:
          B(i, p + 1) = 2.0 * xi * B(i, p) - B(i, p - 1);
          break;
        case PolyBasis::Legendre:
          B(i, p + 1) =
              ((2.0 * p + 1.0) * xi * B(i, p) - p * B(i, p - 1)) / (p + 1.0);
          break;
        case PolyBasis::Hermite:
          B(i, p + 1) = 2.0 * xi * B(i, p) - 2.0 * p * B(i, p - 1);
          break;
      }
    }
  }
  return B;
}

// Largest leading column block of A with cond <= kConditionCap. Nested scan:
// the retained block is the longest prefix that stays well conditioned.
int retained_orders(const Eigen::MatrixXd& A) {
  int keep = 1;
  for (int k = 2; k <= A.cols(); ++k) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A.leftCols(k));
    const auto& s = svd.singularValues();
    if (s(0) <= kConditionCap * s(s.size() - 1))
      keep = k;
    else
      break;
  }
  return keep;
}

struct DesignKey {
  int basis;
  int m;
  int max_order;
  bool operator<(const DesignKey& o) const {
    return std::tie(basis, m, max_order) < std::tie(o.basis, o.m, o.max_order);
  }
};

struct Design {
  std::vector<double> sqrt_w;
  Eigen::MatrixXd Q;  // npt x r, thin
  Eigen::MatrixXd R;  // r x r upper
  int retained = 0;
};

const Design& design_for(PolyBasis basis, int m, int N) {
  static std::map<DesignKey, Design> cache;
  static std::mutex mutex;
  const DesignKey key{static_cast<int>(basis), m, N};
  std::scoped_lock lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const auto xs = grid_coords(m);
  std::vector<double> xt(xs.begin() + kOmitPerSide, xs.end() - kOmitPerSide);
  const int npt = static_cast<int>(xt.size());
  if (npt < 2) throw std::invalid_argument("grid too small after omitting 3 per side");

  Design design;
  design.sqrt_w.resize(npt);
  for (int i = 0; i < npt; ++i) {
    const double left = i == 0 ? xt[0] : xt[i - 1];
    const double right = i == npt - 1 ? xt[npt - 1] : xt[i + 1];
    design.sqrt_w[i] = std::sqrt((right - left) / 2.0);
  }

  const int P = std::min(N, npt - 1);
  Eigen::MatrixXd A = basis_matrix(xt, P, basis);
  for (int i = 0; i < npt; ++i) A.row(i) *= design.sqrt_w[i];

  design.retained = retained_orders(A);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A.leftCols(design.retained));
  design.Q = qr.householderQ() * Eigen::MatrixXd::Identity(npt, design.retained);
  design.R = qr.matrixQR()
                 .topLeftCorner(design.retained, design.retained)
                 .triangularView<Eigen::Upper>();
  return cache.emplace(key, std::move(design)).first->second;
}

std::atomic<bool> hermite_warned{false};

}  // namespace

PolyResult poly_complexity(const FunctionSample& sample, PolyBasis basis, int N) {
  const int d = sample.grid.dim;
  const int m = sample.grid.m;
  if (d != 1 && d != 2)
    throw std::invalid_argument("poly_complexity requires d in {1,2}");
  if (N < 1) throw std::invalid_argument("max order must be positive");
  if (basis == PolyBasis::Hermite && N > 30 &&
      !hermite_warned.exchange(true)) {
    std::fprintf(stderr,
                 "archprobe: hermite basis is numerically unstable beyond "
                 "order 30; coefficients are truncated by conditioning\n");
  }
  const Design& design = design_for(basis, m, N);
  const int r = design.retained;
  const int npt = static_cast<int>(design.sqrt_w.size());
  const auto upper = design.R.triangularView<Eigen::Upper>();

  PolyResult result;
  result.spectrum.basis = basis;
  result.spectrum.max_order = N;
  result.spectrum.retained = r;
  result.spectrum.coeffs = Eigen::MatrixXd::Zero(N + 1, N + 1);

  // Order (0,0) is excluded from both sums, mirroring the Fourier DC rule.
  double mass = 0.0, weighted = 0.0;
  if (d == 1) {
    Eigen::VectorXd zt(npt);
    for (int i = 0; i < npt; ++i)
      zt(i) = sample.values[static_cast<std::size_t>(i + kOmitPerSide)] *
              design.sqrt_w[i];
    const Eigen::VectorXd c = upper.solve(design.Q.transpose() * zt);
    result.spectrum.coeffs.col(0).head(r) = c;
    for (int p = 1; p < r; ++p) {
      mass += std::abs(c(p));
      weighted += std::abs(c(p)) * p;
    }
  } else {
    Eigen::MatrixXd Zt(npt, npt);
    for (int i = 0; i < npt; ++i)
      for (int j = 0; j < npt; ++j)
        Zt(i, j) = sample.values[static_cast<std::size_t>(i + kOmitPerSide) * m +
                                 (j + kOmitPerSide)] *
                   design.sqrt_w[i] * design.sqrt_w[j];
    const Eigen::MatrixXd M = design.Q.transpose() * Zt * design.Q;
    const Eigen::MatrixXd Y = upper.solve(M);
    const Eigen::MatrixXd C = upper.solve(Y.transpose()).transpose();
    result.spectrum.coeffs.topLeftCorner(r, r) = C;
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q) {
        if (p == 0 && q == 0) continue;
        const double a = std::abs(C(p, q));
        mass += a;
        weighted += a * std::sqrt(static_cast<double>(p) * p +
                                  static_cast<double>(q) * q);
      }
  }

  result.score.measure =
      basis == PolyBasis::Legendre ? Measure::Legendre : Measure::Chebyshev;
  result.score.raw = mass < 1e-12 ? 0.0 : weighted / mass;
  result.score.grid_m = m;
  return result;
}

}  // namespace archprobe
