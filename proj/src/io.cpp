#include "qmult/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qmult {

json descriptor_to_json(const ChannelDescriptor& d) {
  json j = {{"family", d.family}, {"params", d.params}};
  if (d.seed) j["seed"] = *d.seed;
  return j;
}

ChannelDescriptor descriptor_from_json(const json& j) {
  ChannelDescriptor d;
  if (!j.is_object()) throw InputError("metadata: expected an object");
  d.family = j.value("family", std::string());
  if (j.contains("params")) d.params = j.at("params");
  if (j.contains("seed") && !j.at("seed").is_null()) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw InputError("metadata.seed: expected an integer");
    }
    d.seed = j.at("seed").get<std::uint64_t>();
  }
  return d;
}

json matrix_to_json(const Matrix& a) {
  json out = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.push_back({a(r, c).real(), a(r, c).imag()});
  }
  return out;
}

json matrix_rows_to_json(const Matrix& a) {
  json out = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back({a(r, c).real(), a(r, c).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const char* field) {
  const std::string name(field);
  if (!j.is_array()) throw InputError(name + ": expected an array");
  if (static_cast<Eigen::Index>(j.size()) != rows * cols) {
    throw InputError(name + ": expected " + std::to_string(rows * cols) + " entries, got " + std::to_string(j.size()));
  }
  Matrix a(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const json& e = j[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InputError(name + "[" + std::to_string(k) + "]: expected [re, im]");
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw InputError(name + "[" + std::to_string(k) + "]: non-finite entry");
    }
    a(k / cols, k % cols) = cplx(re, im);
  }
  return a;
}

json channel_to_json(const ChannelMap& k, const std::optional<ChannelDescriptor>& meta) {
  json j = {{"n", k.in_dim()}, {"m", k.out_dim()}, {"transfer", matrix_to_json(k.transfer())}};
  if (meta) j["metadata"] = descriptor_to_json(*meta);
  return j;
}

DescribedChannel channel_from_json(const json& j) {
  if (!j.is_object()) throw InputError("channel: expected a JSON object");
  for (const char* key : {"n", "m", "transfer"}) {
    if (!j.contains(key)) throw InputError(std::string("channel: missing field '") + key + "'");
  }
  for (const char* key : {"n", "m"}) {
    if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 1 || j.at(key).get<long long>() > 64) {
      throw InputError(std::string(key) + ": expected an integer in [1, 64]");
    }
  }
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  Matrix t = matrix_from_json(j.at("transfer"), static_cast<Eigen::Index>(m) * m, static_cast<Eigen::Index>(n) * n,
                              "transfer");
  ChannelDescriptor desc{"file", json::object(), std::nullopt};
  if (j.contains("metadata")) desc = descriptor_from_json(j.at("metadata"));
  return {ChannelMap(n, m, std::move(t)), std::move(desc)};
}

DescribedChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open channel file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("channel file '" + path + "' is not valid JSON: " + e.what());
  }
  return channel_from_json(j);
}

void save_channel(const std::string& path, const ChannelMap& k, const std::optional<ChannelDescriptor>& meta) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write channel file '" + path + "'");
  out << channel_to_json(k, meta).dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

json norm_result_to_json(const NormResult& r) {
  json j = {{"value", r.value},
            {"converged", r.converged},
            {"restarts_agreeing", r.restarts_agreeing},
            {"exact", r.exact},
            {"maximizer", matrix_rows_to_json(r.maximizer)}};
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

}  // namespace qmult
