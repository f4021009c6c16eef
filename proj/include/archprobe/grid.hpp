#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "archprobe/network.hpp"

namespace archprobe {

// Regular endpoint-inclusive grid over [-1,1]^d.
struct GridSpec {
  int dim = 2;
  int m = 64;
};

// values holds m^d entries in row-major axis order, last axis fastest.
struct FunctionSample {
  GridSpec grid;
  std::vector<double> values;
  std::string provenance;
};

// m corners joined by m segments of m regularly spaced points each;
// consecutive segments share endpoints. values has length m*m.
struct TraversalSample {
  int dim = 0;
  int m = 0;
  std::vector<double> values;
};

// Endpoint-inclusive linspace over [-1,1]; m=1 degenerates to {-1}.
std::vector<double> grid_coords(int m);

// All grid points as an (m^d x d) matrix, same ordering as FunctionSample.
Eigen::MatrixXd grid_points(const GridSpec& grid);

// Throws std::invalid_argument when m^d exceeds the memory budget, pointing
// at traversal sampling as the high-dimensional alternative.
FunctionSample sample_grid(const Network& net, const GridSpec& grid,
                           int jobs = 1);

TraversalSample sample_traversals(const Network& net, int d, int m,
                                  std::uint64_t seed);

}  // namespace archprobe
