// End-to-end checks of the command-line contract: subcommands, exit codes,
// report files and grid dumps.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "monocalc/report.hpp"

namespace fs = std::filesystem;
using namespace monocalc;

namespace {

const std::string kCli = MONOCALC_CLI_PATH;
const std::string kData = MONOCALC_DATA_DIR;

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run(const std::string& args) {
  fs::path tmp = fs::temp_directory_path() / "monocalc_cli_out.txt";
  std::string cmd = kCli + " " + args + " > " + tmp.string() + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

}  // namespace

TEST_CASE("eval-phi prints the brute-force value at a point") {
  auto r = run("eval-phi --op " + kData + "/ops/twopoint.json --at 1,0");
  CHECK(r.exit_code == 0);
  CHECK(std::stod(r.stdout_text) == 0.0);

  auto r2 = run("eval-phi --op " + kData + "/ops/twopoint.json --at 2,2");
  CHECK(std::stod(r2.stdout_text) == 3.0);
}

TEST_CASE("eval-s at a hull midpoint") {
  auto r = run("eval-s --op " + kData + "/ops/twopoint.json --at 0.5,0.5");
  CHECK(r.exit_code == 0);
  CHECK(std::stod(r.stdout_text) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("polar-decide on the two-point graph exits 1 with a certificate") {
  fs::path out = fs::temp_directory_path() / "monocalc_cli_reports";
  fs::remove_all(out);
  auto r = run("polar-decide --op " + kData + "/ops/twopoint.json --out " + out.string());
  CHECK(r.exit_code == 1);
  std::ifstream rep(out / "two_point__polar-decide.json");
  REQUIRE(rep.good());
  nlohmann::json j;
  rep >> j;
  CHECK(j.at("status") == "fail");
  REQUIRE(!j.at("witnesses").empty());
  const auto& w = j.at("witnesses")[0];
  CHECK(w.at("type") == "polar_certificate");
  CHECK(w.at("product").get<double>() < 0.0);
}

TEST_CASE("premax exit codes separate pass from fail") {
  CHECK(run("premax --op " + kData + "/ops/identity.json").exit_code == 0);
  CHECK(run("premax --op " + kData + "/ops/halfline.json").exit_code == 1);
}

TEST_CASE("enlargement membership query and t0") {
  CHECK(run("enlargement --op " + kData + "/ops/abs.json --eps 1 --at 1,0").exit_code == 0);
  CHECK(run("enlargement --op " + kData + "/ops/abs.json --eps 0.5 --at 1,0").exit_code == 1);
  CHECK(run("enlargement --op " + kData + "/ops/abs.json --t0").exit_code == 0);
  CHECK(run("enlargement --op " + kData + "/ops/halfline.json --t0").exit_code == 1);
}

TEST_CASE("enlargement slice dump lists dual grid members") {
  auto r = run("enlargement --op " + kData + "/ops/abs.json --eps 0 --slice-at 0");
  CHECK(r.exit_code == 0);
  std::stringstream ss(r.stdout_text);
  std::string line;
  int count = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    double v = std::stod(line);
    CHECK(v >= -1.0 - 1e-12);
    CHECK(v <= 1.0 + 1e-12);
    ++count;
  }
  CHECK(count == 21);  // [-1,1] on the op file's 0.1-step dual grid
}

TEST_CASE("br-search reports the worked example") {
  auto r = run("br-search --op " + kData +
               "/ops/abs.json --x 1 --xs 0 --eps 1 --eps-tilde 1.1 --lambda 1");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.stdout_text);
  CHECK(j.at("data").at("satisfied") == true);
  CHECK(j.at("data").at("found").at("x")[0].get<double>() == doctest::Approx(0.5));
  CHECK(j.at("data").at("found").at("xs")[0].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("structure command flags the abs kink") {
  auto r = run("structure --op " + kData + "/ops/abs.json");
  CHECK(r.exit_code == 1);  // convexity certificate emitted
  nlohmann::json j = nlohmann::json::parse(r.stdout_text);
  CHECK(j.at("data").at("convexity") == "fail");
  CHECK(j.at("data").at("maximality") == "pass");

  CHECK(run("structure --op " + kData + "/ops/identity.json").exit_code == 0);
}

TEST_CASE("family-check distinguishes phi and s for non-pre-maximal sets") {
  CHECK(run("family-check --op " + kData + "/ops/halfline.json --which phi --tol 1e-6").exit_code ==
        1);
  CHECK(run("family-check --op " + kData + "/ops/halfline.json --which s --tol 1e-6").exit_code ==
        0);
}

TEST_CASE("grid dumps carry the documented header") {
  fs::path csv = fs::temp_directory_path() / "monocalc_grid.csv";
  auto r = run("eval-phi --op " + kData + "/ops/twopoint.json --window -1:1:3,-1:1:3 --dump-grid " +
               csv.string());
  CHECK(r.exit_code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x0,xs0,value");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 9);
}

TEST_CASE("schema errors exit 2") {
  fs::path bad = fs::temp_directory_path() / "monocalc_bad_op.json";
  std::ofstream(bad.string()) << "{\"dim\": 1, \"kind\": \"mystery\"}";
  CHECK(run("eval-phi --op " + bad.string() + " --at 0,0").exit_code == 2);
  CHECK(run("eval-phi --op /nonexistent/path.json --at 0,0").exit_code == 2);
}

TEST_CASE("cond-as refuses non-maximal operators with exit 2") {
  CHECK(run("cond-as --op " + kData + "/ops/twopoint.json").exit_code == 2);
  CHECK(run("cond-as --op " + kData + "/ops/identity.json --tol 1e-6").exit_code == 0);
}

TEST_CASE("report-diff exit contract") {
  fs::path out = fs::temp_directory_path() / "monocalc_diff";
  fs::remove_all(out);
  run("premax --op " + kData + "/ops/identity.json --out " + (out / "a").string());
  run("premax --op " + kData + "/ops/identity.json --out " + (out / "b").string());
  std::string a = (out / "a" / "identity__premax.json").string();
  std::string b = (out / "b" / "identity__premax.json").string();
  CHECK(run("report-diff " + a + " " + b).exit_code == 0);

  // different check names are a schema-level mismatch
  run("enlargement --op " + kData + "/ops/abs.json --t0 --out " + (out / "c").string());
  std::string c = (out / "c" / "abs_subdiff__t0.json").string();
  CHECK(run("report-diff " + a + " " + c).exit_code == 2);
}

TEST_CASE("suite picks the corpus from the environment variable") {
  fs::path out = fs::temp_directory_path() / "monocalc_env_suite";
  fs::remove_all(out);
  std::string cmd = "MONOCALC_CORPUS=" + kData + "/corpus.json " + kCli +
                    " suite --golden " + kData + "/golden --out " + out.string() +
                    " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(out / "suite.json"));
}
