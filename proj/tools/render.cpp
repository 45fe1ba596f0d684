#include "cli.hpp"

#include <algorithm>
#include <sstream>

namespace lopc::cli {

namespace {

std::string scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

bool all_scalars(const Json& v) {
  return std::all_of(v.begin(), v.end(), [](const Json& e) { return !e.is_structured(); });
}

void flatten(const Json& v, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
  if (v.is_object()) {
    for (const auto& [k, e] : v.items()) flatten(e, path.empty() ? k : path + "." + k, rows);
  } else if (v.is_array() && all_scalars(v)) {
    std::string joined;
    for (const auto& e : v) joined += (joined.empty() ? "" : ", ") + scalar(e);
    rows.emplace_back(path, "[" + joined + "]");
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", rows);
  } else {
    rows.emplace_back(path, scalar(v));
  }
}

}  // namespace

std::string render_table(const Json& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << k << ": " << v << '\n';
  return os.str();
}

}  // namespace lopc::cli
