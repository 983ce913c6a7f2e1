#include "petz/channel_io.hpp"

namespace petz {

nlohmann::json channel_to_json(const KrausChannel& channel) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& k : channel.kraus()) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(r, c).real(), k(r, c).imag()});
      rows.push_back(std::move(row));
    }
    ops.push_back(std::move(rows));
  }
  return {{"label", channel.label()}, {"dim_in", channel.dim_in()}, {"dim_out", channel.dim_out()}, {"kraus", ops}};
}

KrausChannel channel_from_json(const nlohmann::json& j) {
  try {
    const auto dim_in = j.at("dim_in").get<Eigen::Index>();
    const auto dim_out = j.at("dim_out").get<Eigen::Index>();
    std::vector<ComplexMatrix> ops;
    for (const auto& op : j.at("kraus")) {
      if (static_cast<Eigen::Index>(op.size()) != dim_out) throw Error(ErrorKind::ConfigError, "kraus row count differs from dim_out");
      ComplexMatrix k(dim_out, dim_in);
      for (Eigen::Index r = 0; r < dim_out; ++r) {
        const auto& row = op.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != dim_in) throw Error(ErrorKind::ConfigError, "kraus column count differs from dim_in");
        for (Eigen::Index c = 0; c < dim_in; ++c) {
          const auto& z = row.at(static_cast<std::size_t>(c));
          k(r, c) = Complex(z.at(0).get<double>(), z.at(1).get<double>());
        }
      }
      ops.push_back(std::move(k));
    }
    return make_channel(std::move(ops), j.value("label", std::string("channel")));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed channel record: ") + e.what());
  }
}

std::string serialize_channel(const KrausChannel& channel) { return channel_to_json(channel).dump(2); }

KrausChannel deserialize_channel(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("invalid JSON: ") + e.what());
  }
  return channel_from_json(j);
}

}  // namespace petz
