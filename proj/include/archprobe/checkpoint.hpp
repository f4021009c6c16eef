#pragma once

#include "archprobe/network.hpp"

#include <string>

namespace archprobe {

// Checkpoint layout (version 1), little-endian throughout:
//   bytes 0..7   magic "APCKPT01"
//   bytes 8..15  u64 header length H
//   bytes 16..   H bytes of JSON text: {"format_version":1,
//                "arch":"<identifier>","param_count":N}
//   then         N little-endian IEEE-754 f64 parameter values in
//                flatten_parameters order
void save_checkpoint(const Network& net, const std::string& path);

// Rebuilds the network from the recorded identifier, then loads parameters.
// Errors: bad magic, version mismatch, malformed header, count mismatch,
// truncated payload.
Network load_checkpoint(const std::string& path);

}  // namespace archprobe
