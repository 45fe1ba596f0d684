#include "lopc/io.hpp"

#include <fstream>

namespace lopc {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

Rational rational_field(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("probabilities must be rational strings such as \"1/3\"");
}

int int_field(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

JointDist distribution_from_json(const Json& j) {
  std::vector<Party> parties;
  const auto& ps = field(j, "parties");
  if (!ps.is_array()) throw ParseError("'parties' must be a list");
  for (const auto& p : ps) {
    const auto& label = field(p, "label");
    if (!label.is_string()) throw ParseError("party label must be a string");
    const Role role = p.contains("role") ? parse_role(p.at("role").get<std::string>()) : Role::honest;
    parties.push_back({{label.get<std::string>(), role}, int_field(field(p, "alphabet"), "alphabet")});
  }

  std::map<Outcome, Prob> entries;
  const auto& es = field(j, "entries");
  if (!es.is_array()) throw ParseError("'entries' must be a list");
  for (const auto& e : es) {
    const auto& o = field(e, "outcome");
    if (!o.is_array()) throw ParseError("outcome must be an integer list");
    if (o.size() != parties.size())
      throw ParseError("outcome arity " + std::to_string(o.size()) + " does not match " +
                       std::to_string(parties.size()) + " parties");
    Outcome outcome;
    for (const auto& v : o) outcome.push_back(int_field(v, "outcome symbol"));
    const Prob w = rational_field(field(e, "prob"));
    auto [it, fresh] = entries.emplace(outcome, w);
    if (!fresh) it->second += w;
  }
  return JointDist(std::move(parties), std::move(entries));
}

Json to_json(const JointDist& d) {
  Json ps = Json::array();
  for (const auto& p : d.parties())
    ps.push_back({{"label", p.label()}, {"role", std::string(to_string(p.id.role))}, {"alphabet", p.alphabet}});
  Json es = Json::array();
  for (const auto& [o, w] : d.entries()) es.push_back({{"outcome", o}, {"prob", to_string(w)}});
  return {{"parties", ps}, {"entries", es}};
}

ProtocolIR protocol_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("protocol must be a JSON object");
  ProtocolIR p;
  if (j.contains("rounds")) {
    for (const auto& r : j.at("rounds")) {
      Round round;
      round.speaker = field(r, "speaker").get<std::string>();
      for (const auto& row : field(r, "table")) {
        std::vector<Prob> weights;
        for (const auto& w : row) weights.push_back(rational_field(w));
        round.rule.table.push_back(std::move(weights));
      }
      p.rounds.push_back(std::move(round));
    }
  }
  if (j.contains("maps")) {
    for (const auto& m : j.at("maps")) {
      OutputMap o;
      o.party = field(m, "party").get<std::string>();
      o.alphabet = m.contains("alphabet") ? int_field(m.at("alphabet"), "alphabet") : 0;
      for (const auto& row : field(m, "per_message")) {
        std::vector<int> map;
        for (const auto& v : row) map.push_back(int_field(v, "map symbol"));
        o.per_message.push_back(std::move(map));
      }
      p.outputs.push_back(std::move(o));
    }
  }
  if (j.contains("forget"))
    for (const auto& f : j.at("forget")) p.forget.push_back(f.get<std::string>());
  if (j.contains("fail") && !j.at("fail").is_null()) {
    const auto& f = j.at("fail");
    p.fail = FailMessage{static_cast<std::size_t>(int_field(field(f, "message"), "fail message")),
                         int_field(field(f, "sink"), "fail sink")};
  }
  try {
    p.validate();
  } catch (const ProtocolError& e) {
    throw ParseError(std::string("invalid protocol: ") + e.what());
  }
  return p;
}

Json to_json(const ProtocolIR& p) {
  Json rounds = Json::array();
  for (const auto& r : p.rounds) {
    Json table = Json::array();
    for (const auto& row : r.rule.table) {
      Json ws = Json::array();
      for (const auto& w : row) ws.push_back(to_string(w));
      table.push_back(ws);
    }
    rounds.push_back({{"speaker", r.speaker}, {"table", table}});
  }
  Json maps = Json::array();
  for (const auto& o : p.outputs)
    maps.push_back({{"party", o.party}, {"alphabet", o.alphabet}, {"per_message", o.per_message}});
  Json j = {{"rounds", rounds}, {"maps", maps}, {"forget", p.forget}};
  j["fail"] = p.fail ? Json{{"message", p.fail->message}, {"sink", p.fail->sink}} : Json(nullptr);
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

JointDist parse_distribution(const std::filesystem::path& path) {
  try {
    return distribution_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ProtocolIR parse_protocol(const std::filesystem::path& path) {
  try {
    return protocol_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace lopc
