#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "monocalc/report.hpp"
#include "test_util.hpp"

using namespace monocalc;

namespace {

CheckReport demo_report() {
  CheckReport r;
  r.check = "demo";
  r.op = "identity";
  r.window = tu::win1(-2, 2, 5);
  r.tolerances["value"] = 1e-8;
  r.status = CheckStatus::pass;
  r.data["min_gap"] = 0.25;
  r.stats.evaluations = 10;
  r.stats.lp_calls = 3;
  r.stats.wall_ms = 17.5;
  r.seed = 42;
  return r;
}

}  // namespace

TEST_CASE("report JSON round trip") {
  CheckReport r = demo_report();
  nlohmann::json j = report_to_json(r);
  CheckReport back = report_from_json(j);
  CHECK(report_to_json(back) == j);
  CHECK(back.status == CheckStatus::pass);
  CHECK(back.tolerances.at("value") == 1e-8);
  CHECK(back.stats.lp_calls == 3);
}

TEST_CASE("status strings") {
  for (CheckStatus s : {CheckStatus::pass, CheckStatus::fail, CheckStatus::bounded_pass,
                        CheckStatus::refused})
    CHECK(status_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(status_from_string("maybe"), input_error);
}

TEST_CASE("report diff ignores wall time, flags real differences") {
  nlohmann::json a = report_to_json(demo_report());
  nlohmann::json b = a;
  b["statistics"]["wall_ms"] = 99999.0;
  CHECK(report_diff(a, b).equivalent);

  nlohmann::json c = a;
  c["status"] = "fail";
  DiffResult d = report_diff(a, c);
  CHECK_FALSE(d.equivalent);
  CHECK(d.first_difference == "/status");

  nlohmann::json e = a;
  e["data"]["min_gap"] = 0.5;
  DiffResult d2 = report_diff(a, e);
  CHECK_FALSE(d2.equivalent);
  CHECK(d2.first_difference == "/data/min_gap");
}

TEST_CASE("verdict-only diff tolerates witness differences") {
  nlohmann::json a = report_to_json(demo_report());
  nlohmann::json b = a;
  b["witnesses"].push_back({{"type", "note"}});
  b["seed"] = 777;
  CHECK_FALSE(report_diff(a, b).equivalent);
  CHECK(report_diff(a, b, /*verdict_only=*/true).equivalent);
}

TEST_CASE("diff refuses mismatched checks") {
  nlohmann::json a = report_to_json(demo_report());
  nlohmann::json b = a;
  b["check"] = "other";
  CHECK_THROWS_AS(report_diff(a, b), input_error);
}

TEST_CASE("atomic report writing") {
  CheckReport r = demo_report();
  std::string path = "/tmp/monocalc_test_report.json";
  write_report(r, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK(report_diff(j, report_to_json(r)).equivalent);
  std::remove(path.c_str());
}
