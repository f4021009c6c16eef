#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "archprobe/grid.hpp"

namespace archprobe {

// Min-max normalized 8-bit render of a d=2 sample as binary PGM (P5).
// Constant samples map to uniform mid-gray 128. Pixel (row j, column i)
// holds values[i*m+j]: the first grid axis runs along image columns, so
// f(x,y)=x renders as a horizontal ramp.
std::vector<std::uint8_t> render_pgm(const FunctionSample& sample);

// ASCII (P2) variant for diffable test fixtures.
std::vector<std::uint8_t> render_pgm_ascii(const FunctionSample& sample);

// Arbitrary matrix render (heatmaps): pixel (r,c) = img(r,c), min-max over
// finite entries, NaN cells mid-gray.
std::vector<std::uint8_t> render_pgm_matrix(const Eigen::MatrixXd& img);

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

// Reads P5 or P2 with maxval 255 into values scaled to [0,1], row-major in
// the same axis convention render_pgm writes. Throws on malformed input.
FunctionSample read_pgm(const std::string& path);

}  // namespace archprobe
