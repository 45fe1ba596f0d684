#pragma once

#include "lopc/dist.hpp"
#include "lopc/protocol.hpp"

#include <json.hpp>

#include <filesystem>

namespace lopc {

using Json = nlohmann::ordered_json;

// {"parties": [{"label", "role", "alphabet"}], "entries": [{"outcome", "prob"}]}.
// Throws ParseError on malformed input and NormalizationError (with the exact
// deficit) when the entries do not sum to one.
JointDist distribution_from_json(const Json& j);
Json to_json(const JointDist& d);

// {"rounds": [{"speaker", "table"}], "maps": [{"party", "alphabet",
// "per_message"}], "forget": [...], "fail": {"message", "sink"}}.
ProtocolIR protocol_from_json(const Json& j);
Json to_json(const ProtocolIR& p);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

JointDist parse_distribution(const std::filesystem::path& path);
ProtocolIR parse_protocol(const std::filesystem::path& path);

}  // namespace lopc
