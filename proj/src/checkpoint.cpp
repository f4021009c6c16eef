#include "archprobe/checkpoint.hpp"

#include "archprobe/csv.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace archprobe {

namespace {

constexpr char kMagic[9] = "APCKPT01";  // 8 payload bytes + NUL
constexpr int kFormatVersion = 1;

void append_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t read_u64_le(const std::string& blob, std::size_t off) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(blob[off + i]))
         << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const Network& net, const std::string& path) {
  const Eigen::VectorXd params = flatten_parameters(net);
  nlohmann::json header;
  header["format_version"] = kFormatVersion;
  header["arch"] = describe(net.spec);
  header["param_count"] = static_cast<std::uint64_t>(params.size());
  const std::string htext = header.dump();

  std::string blob;
  blob.reserve(16 + htext.size() + 8 * static_cast<std::size_t>(params.size()));
  blob.append(kMagic, 8);
  append_u64_le(blob, htext.size());
  blob += htext;
  for (Eigen::Index i = 0; i < params.size(); ++i)
    append_u64_le(blob, std::bit_cast<std::uint64_t>(params(i)));
  write_text_file(path, blob);
}

Network load_checkpoint(const std::string& path) {
  const std::string blob = read_text_file(path);
  if (blob.size() < 16 || blob.compare(0, 8, kMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const std::uint64_t hlen = read_u64_le(blob, 8);
  if (16 + hlen > blob.size())
    throw std::runtime_error("checkpoint: truncated header in " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(blob.substr(16, hlen));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("checkpoint: malformed header in " + path + ": " +
                             e.what());
  }
  if (!header.contains("format_version") ||
      header["format_version"].get<int>() != kFormatVersion)
    throw std::runtime_error("checkpoint: unsupported format version in " +
                             path);
  const auto arch = header.at("arch").get<std::string>();
  const auto count = header.at("param_count").get<std::uint64_t>();

  const std::size_t payload_off = 16 + static_cast<std::size_t>(hlen);
  if (blob.size() - payload_off != 8 * count)
    throw std::runtime_error("checkpoint: payload size mismatch in " + path);

  Network net = init_network(parse_spec(arch), /*seed=*/0);
  if (parameter_count(net) != count)
    throw std::runtime_error("checkpoint: param_count " +
                             std::to_string(count) + " does not match arch " +
                             arch);
  Eigen::VectorXd params(static_cast<Eigen::Index>(count));
  for (std::uint64_t i = 0; i < count; ++i)
    params(static_cast<Eigen::Index>(i)) = std::bit_cast<double>(
        read_u64_le(blob, payload_off + 8 * static_cast<std::size_t>(i)));
  unflatten_parameters(net, params);
  return net;
}

}  // namespace archprobe
