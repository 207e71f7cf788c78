#include "majolat/report.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "majolat/error.hpp"
#include "majolat/verify.hpp"

namespace majolat {

namespace {

struct Group {
  std::uint64_t rows = 0;
  std::uint64_t passed = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_correction = 0.0;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double number(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used == text.size()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line_no) + ": not a number: '" + text + "'");
}

}  // namespace

std::string csv_report_to_json(std::istream& csv) {
  std::string line;
  if (!std::getline(csv, line)) throw Error(ErrorCode::ParseError, "empty report");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error(ErrorCode::ParseError, "unexpected CSV header: " + line);

  using Key = std::tuple<std::string, long, std::string>;
  std::map<Key, Group> groups;
  Group total;
  std::size_t line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 9 fields");
    }
    if (f[8] != "true" && f[8] != "false") {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad passed flag");
    }
    const bool ok = f[8] == "true";
    const double gap = number(f[6], line_no);
    const double correction = number(f[5], line_no);
    const Key key{f[0], static_cast<long>(number(f[1], line_no)), f[2]};
    for (Group* g : {&groups[key], &total}) {
      ++g->rows;
      if (ok) ++g->passed;
      g->min_gap = std::min(g->min_gap, gap);
      if (correction > g->max_correction) g->max_correction = correction;
    }
  }

  auto describe = [](const Group& g) {
    nlohmann::ordered_json j;
    j["rows"] = g.rows;
    j["passed"] = g.passed;
    j["failed"] = g.rows - g.passed;
    j["pass_rate"] = g.rows ? static_cast<double>(g.passed) / static_cast<double>(g.rows) : 0.0;
    j["min_gap"] = g.rows ? nlohmann::ordered_json(g.min_gap) : nullptr;
    j["max_correction"] = g.max_correction;
    return j;
  };

  nlohmann::ordered_json out = describe(total);
  out["groups"] = nlohmann::ordered_json::array();
  for (const auto& [key, g] : groups) {
    nlohmann::ordered_json j;
    j["inequality_id"] = std::get<0>(key);
    j["d"] = std::get<1>(key);
    const std::string& alpha = std::get<2>(key);
    j["alpha"] = alpha.empty() ? nlohmann::ordered_json(nullptr)
                               : nlohmann::ordered_json(number(alpha, 0));
    j.update(describe(g));
    out["groups"].push_back(std::move(j));
  }
  return out.dump(2);
}

}  // namespace majolat
