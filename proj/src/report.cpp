#include "monocalc/report.hpp"

#include <cstdio>
#include <fstream>

namespace monocalc {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::bounded_pass: return "bounded-pass";
    case CheckStatus::refused: return "refused";
  }
  return "?";
}

CheckStatus status_from_string(const std::string& s) {
  if (s == "pass") return CheckStatus::pass;
  if (s == "fail") return CheckStatus::fail;
  if (s == "bounded-pass") return CheckStatus::bounded_pass;
  if (s == "refused") return CheckStatus::refused;
  throw input_error("unknown check status '" + s + "'");
}

nlohmann::json pair_point_json(const PairPoint& p) {
  return nlohmann::json{{"x", p.x}, {"xs", p.xs}};
}

nlohmann::json report_to_json(const CheckReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["operator"] = r.op;
  if (r.window) j["window"] = box_to_json(*r.window);
  j["tolerances"] = r.tolerances;
  j["status"] = to_string(r.status);
  j["witnesses"] = r.witnesses;
  j["data"] = r.data;
  j["statistics"] = {{"evaluations", r.stats.evaluations},
                     {"lp_calls", r.stats.lp_calls},
                     {"wall_ms", r.stats.wall_ms}};
  j["tool_version"] = kToolVersion;
  j["seed"] = r.seed;
  return j;
}

CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport r;
  r.check = j.at("check").get<std::string>();
  r.op = j.at("operator").get<std::string>();
  if (j.contains("window")) r.window = box_from_json(j.at("window"));
  if (j.contains("tolerances"))
    r.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
  r.status = status_from_string(j.at("status").get<std::string>());
  r.witnesses = j.value("witnesses", nlohmann::json::array());
  r.data = j.value("data", nlohmann::json::object());
  if (j.contains("statistics")) {
    const auto& s = j.at("statistics");
    r.stats.evaluations = s.value("evaluations", std::int64_t{0});
    r.stats.lp_calls = s.value("lp_calls", std::int64_t{0});
    r.stats.wall_ms = s.value("wall_ms", 0.0);
  }
  r.seed = j.value("seed", std::uint64_t{0});
  return r;
}

void write_report(const CheckReport& r, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw input_error("cannot write report file: " + tmp);
    out << report_to_json(r).dump(2) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw input_error("cannot move report into place: " + path);
}

namespace {

void diff_recurse(const nlohmann::json& a, const nlohmann::json& b, const std::string& path,
                  DiffResult& out) {
  if (!out.equivalent) return;
  if (path == "/statistics/wall_ms") return;  // never compared
  // containers must match structurally; scalars compare by value (numeric
  // comparison is cross-type, so a reparsed integer never looks different)
  if (a.is_object() != b.is_object() || a.is_array() != b.is_array()) {
    out.equivalent = false;
    out.first_difference = path.empty() ? "/" : path;
    return;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) {
        out.equivalent = false;
        out.first_difference = path + "/" + it.key();
        return;
      }
      diff_recurse(it.value(), b.at(it.key()), path + "/" + it.key(), out);
      if (!out.equivalent) return;
    }
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (!a.contains(it.key())) {
        out.equivalent = false;
        out.first_difference = path + "/" + it.key();
        return;
      }
    }
  } else if (a.is_array()) {
    if (a.size() != b.size()) {
      out.equivalent = false;
      out.first_difference = path;
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      diff_recurse(a[i], b[i], path + "/" + std::to_string(i), out);
      if (!out.equivalent) return;
    }
  } else if (a != b) {
    out.equivalent = false;
    out.first_difference = path.empty() ? "/" : path;
  }
}

}  // namespace

DiffResult report_diff(const nlohmann::json& a, const nlohmann::json& b, bool verdict_only) {
  for (const char* key : {"check", "operator", "status"}) {
    if (!a.contains(key) || !b.contains(key))
      throw input_error(std::string("report_diff: missing field '") + key + "'");
  }
  if (a.at("check") != b.at("check"))
    throw input_error("report_diff: reports are for different checks");
  DiffResult out;
  if (verdict_only) {
    for (const char* key : {"check", "operator", "status"}) {
      if (a.at(key) != b.at(key)) {
        out.equivalent = false;
        out.first_difference = std::string("/") + key;
        return out;
      }
    }
    return out;
  }
  diff_recurse(a, b, "", out);
  return out;
}

}  // namespace monocalc
