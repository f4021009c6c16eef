#include "archprobe/grid.hpp"

#include <stdexcept>

#include "archprobe/parallel.hpp"
#include "archprobe/rng.hpp"

namespace archprobe {

namespace {

// 16M points keeps a d=2..3 sample comfortably in memory while rejecting
// accidental high-d grids.
constexpr std::uint64_t kMaxGridPoints = std::uint64_t{1} << 24;

std::uint64_t total_points(const GridSpec& grid) {
  std::uint64_t total = 1;
  for (int axis = 0; axis < grid.dim; ++axis) {
    total *= static_cast<std::uint64_t>(grid.m);
    if (total > kMaxGridPoints)
      throw std::invalid_argument(
          "grid of m^d points exceeds the memory budget; use "
          "sample_traversals for high-dimensional inputs");
  }
  return total;
}

}  // namespace

std::vector<double> grid_coords(int m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  std::vector<double> xs(m);
  if (m == 1) {
    xs[0] = -1.0;
    return xs;
  }
  for (int i = 0; i < m; ++i)
    xs[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(m - 1);
  return xs;
}

Eigen::MatrixXd grid_points(const GridSpec& grid) {
  const auto total = total_points(grid);
  const auto xs = grid_coords(grid.m);
  Eigen::MatrixXd points(static_cast<Eigen::Index>(total), grid.dim);
  std::vector<int> idx(grid.dim, 0);
  for (std::uint64_t row = 0; row < total; ++row) {
    for (int axis = 0; axis < grid.dim; ++axis)
      points(static_cast<Eigen::Index>(row), axis) = xs[idx[axis]];
    for (int axis = grid.dim - 1; axis >= 0; --axis) {
      if (++idx[axis] < grid.m) break;
      idx[axis] = 0;
    }
  }
  return points;
}

FunctionSample sample_grid(const Network& net, const GridSpec& grid, int jobs) {
  if (grid.dim != net.spec.input_dim)
    throw std::invalid_argument("grid dimension does not match network input");
  const Eigen::MatrixXd points = grid_points(grid);
  const Eigen::Index n = points.rows();
  FunctionSample sample;
  sample.grid = grid;
  sample.values.resize(static_cast<std::size_t>(n));
  const Eigen::Index block = 4096;
  const std::size_t chunks = static_cast<std::size_t>((n + block - 1) / block);
  parallel_for(chunks, jobs, [&](std::size_t chunk) {
    const Eigen::Index lo = static_cast<Eigen::Index>(chunk) * block;
    const Eigen::Index len = std::min(block, n - lo);
    const Eigen::VectorXd out = forward_batch(net, points.middleRows(lo, len));
    for (Eigen::Index i = 0; i < len; ++i)
      sample.values[static_cast<std::size_t>(lo + i)] = out(i);
  });
  sample.provenance = describe(net.spec);
  return sample;
}

TraversalSample sample_traversals(const Network& net, int d, int m,
                                  std::uint64_t seed) {
  if (d != net.spec.input_dim)
    throw std::invalid_argument("traversal dimension does not match network input");
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  Rng rng = Rng::stream(seed, 0, StreamRole::Corners);
  // m+1 corners, consecutive distinct, giving m shared-endpoint segments.
  std::vector<Eigen::VectorXd> corners;
  corners.reserve(m + 1);
  while (corners.size() < static_cast<std::size_t>(m + 1)) {
    Eigen::VectorXd corner(d);
    for (int axis = 0; axis < d; ++axis)
      corner(axis) = rng.next_u64() & 1 ? 1.0 : -1.0;
    if (!corners.empty() && corner == corners.back()) continue;
    corners.push_back(std::move(corner));
  }
  Eigen::MatrixXd points(static_cast<Eigen::Index>(m) * m, d);
  Eigen::Index row = 0;
  for (int seg = 0; seg < m; ++seg) {
    const Eigen::VectorXd& a = corners[seg];
    const Eigen::VectorXd delta = corners[seg + 1] - a;
    for (int t = 0; t < m; ++t) {
      const double frac = static_cast<double>(t) / static_cast<double>(m - 1);
      points.row(row++) = (a + frac * delta).transpose();
    }
  }
  TraversalSample sample;
  sample.dim = d;
  sample.m = m;
  const Eigen::VectorXd out = forward_batch(net, points);
  sample.values.assign(out.data(), out.data() + out.size());
  return sample;
}

}  // namespace archprobe
