#pragma once

#include <string>

#include <json.hpp>

#include "petz/channels.hpp"

namespace petz {

// JSON record: {"label", "dim_in", "dim_out", "kraus": [op][row][col] -> [re, im]}.
nlohmann::json channel_to_json(const KrausChannel& channel);
/// Parses and validates trace preservation; throws ConfigError on malformed input.
KrausChannel channel_from_json(const nlohmann::json& j);

std::string serialize_channel(const KrausChannel& channel);
KrausChannel deserialize_channel(const std::string& text);

}  // namespace petz
