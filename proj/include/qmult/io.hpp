#pragma once

// JSON encodings:
//   channel:     {"n", "m", "transfer": [[re, im], ...] row-major, "metadata"?: {"family", "params", "seed"}}
//   norm result: {"value", "converged", "restarts_agreeing", "exact", "maximizer": [[[re, im], ...], ...]}

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qmult/channel.hpp"
#include "qmult/norms.hpp"

namespace qmult {

using json = nlohmann::json;

struct ChannelDescriptor {
  std::string family;
  json params = json::object();
  std::optional<std::uint64_t> seed;
};

struct DescribedChannel {
  ChannelMap map;
  ChannelDescriptor descriptor;
};

json descriptor_to_json(const ChannelDescriptor& d);
ChannelDescriptor descriptor_from_json(const json& j);

/// Row-major list of [re, im] pairs.
json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const char* field);
/// Nested rows: [[[re, im], ...], ...].
json matrix_rows_to_json(const Matrix& a);

json channel_to_json(const ChannelMap& k, const std::optional<ChannelDescriptor>& meta = std::nullopt);
/// Validates shape and finiteness; errors name the offending field.
DescribedChannel channel_from_json(const json& j);
DescribedChannel load_channel(const std::string& path);
void save_channel(const std::string& path, const ChannelMap& k,
                  const std::optional<ChannelDescriptor>& meta = std::nullopt);

json norm_result_to_json(const NormResult& r);

/// I/O failures (unreadable or unwritable files).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmult
