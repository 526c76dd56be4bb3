#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vope/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run vope_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = vope::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("vope_test_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

void check_golden(const std::string& file, std::vector<std::string> args) {
  const Run r = vope_run(std::move(args));
  CHECK(r.code == 0);
  CHECK(r.out == slurp(fs::path(VOPE_GOLDEN_DIR) / file));
}

}  // namespace

TEST_CASE("text output") {
  Run r = vope_run({"ope", "T", "T"});
  CHECK(r.code == 0);
  CHECK(r.out == "T(z) T(w) ~ 1/2*c*I/(z-w)^4 + 2*T/(z-w)^2 + d T/(z-w)\n");

  CHECK(vope_run({"nf", ":T d T: - :d T T:"}).out == "d^(3) T\n");
  CHECK(vope_run({"rp", "T", "3", "T"}).out == "1/2*c*I\n");

  r = vope_run({"wick-right", "T", "T", "T"});
  CHECK(r.out ==
        ":T T:(z) T(w) ~ 3*c*I/(z-w)^6 + (c+8)*T/(z-w)^4 + (c+5)*d T/(z-w)^3"
        " + ((c+2)*d^(2) T + 4*:T T:)/(z-w)^2 + ((c+2)*d^(3) T + 6*:d T T:)/(z-w)\n");

  r = vope_run({"ope", "J^1", "J^2"});
  CHECK(r.out == "J^1(z) J^2(w) ~ i*J^3/(z-w)\n");

  r = vope_run({"--format", "latex", "ope", "T", "T"});
  CHECK(r.out.find("\\frac{2 T}{(z-w)^{2}}") != std::string::npos);
}

TEST_CASE("free indices loop the command") {
  Run r = vope_run({"wick-right", "sum(b){J^b}", "J^b", "J^a"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    ++n;
    const std::string a = std::to_string(n);
    CHECK(line.rfind("[a=" + a + "] ", 0) == 0);
    CHECK(line.find("(k+2)*J^" + a + "/(z-w)^2 + (k+2)*d J^" + a + "/(z-w)") != std::string::npos);
  }
  CHECK(n == 3);
}

TEST_CASE("JSON output matches golden files") {
  check_golden("ope_TT.json", {"--format", "json", "ope", "T", "T"});
  check_golden("sugawara_current.json", {"--format", "json", "wick-right", "sum(b){J^b}", "J^b", "J^a"});
  check_golden("nf_reorder.json", {"--format", "json", "nf", ":T d T: - :d T T:"});
  check_golden("borcherds_TTT.json",
               {"--format", "json", "check-borcherds", "T", "T", "T", "--window", "0..1,0..1,0..1"});
}

TEST_CASE("exit codes") {
  CHECK(vope_run({"check-algebra"}).code == 0);
  CHECK(vope_run({"oracle-verify", ":T T:_(1) T", "--bindings", "c=1/2", "--level", "4"}).code == 0);

  Run r = vope_run({"nf", "T +"});
  CHECK(r.code == 2);
  CHECK(r.err.find("1:4") != std::string::npos);
  CHECK(vope_run({"frobnicate"}).code == 2);
  CHECK(vope_run({"oracle-verify", "T"}).code == 2);                               // --bindings missing
  CHECK(vope_run({"oracle-verify", "T", "--bindings", "c=1", "--level", "11"}).code == 2);
  CHECK(vope_run({"check-algebra", "--cutoff", "1"}).code == 2);
  CHECK(vope_run({"--budget", "3", "rp", ":T T:", "-3", ":T T:"}).code == 3);

  const fs::path bad = write_temp("deformed.alg", "param c\nfield T weight 2\nope T T { 3: c/2*I; 1: 3*T; 0: d T }\n");
  r = vope_run({"--algebra", bad.string(), "check-algebra"});
  CHECK(r.code == 1);
  fs::remove(bad);
}

TEST_CASE("step budget from the environment") {
  ::setenv("VOPE_STEP_BUDGET", "3", 1);
  CHECK(vope_run({"rp", ":T T:", "-3", ":T T:"}).code == 3);
  CHECK(vope_run({"--budget", "1000000", "rp", ":T T:", "-3", ":T T:"}).code == 0);
  ::unsetenv("VOPE_STEP_BUDGET");
}

TEST_CASE("algebra files") {
  const fs::path p = write_temp("mixed.alg", R"(param c
field J weight 1
field T weight 2
ope T T { 3: c/2*I; 1: 2*T; 0: d T }
ope T J { 1: J; 0: d J }
ope J J { 1: I }
)");
  Run r = vope_run({"--algebra", p.string(), "ope", "J", "T"});
  CHECK(r.code == 0);
  CHECK(r.out == "J(z) T(w) ~ J/(z-w)^2\n");
  CHECK(vope_run({"--algebra", p.string(), "check-algebra"}).code == 0);
  fs::remove(p);

  const fs::path bad = write_temp("bad.alg", "param c\nfield T weight 2\nope T T { 1: 2*X }\n");
  r = vope_run({"--algebra", bad.string(), "ope", "T", "T"});
  CHECK(r.code == 2);
  CHECK(r.err.find("3:16") != std::string::npos);
  fs::remove(bad);
}

TEST_CASE("scripts") {
  const fs::path p = write_temp("sugawara.vope", R"(# Sugawara construction from a level-k current algebra
lie su2 level k
let S = sum(a){:J^a J^a:}
let L = 1/(k+2)*S
ope L J^1
nf "L_(3) L"
)");
  Run r = vope_run({"run", p.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("L(z) J^1(w) ~ J^1/(z-w)^2 + d J^1/(z-w)\n") != std::string::npos);
  CHECK(r.out.find("3/2*k/(k+2)*I") != std::string::npos);
  fs::remove(p);

  const fs::path bad = write_temp("bad.vope", "param c\nfield T weight 2\nope T T { 1: 2*Q }\nope T T\n");
  r = vope_run({"run", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find(bad.string() + ":3:16") != std::string::npos);
  fs::remove(bad);

  CHECK(vope_run({"run", "/nonexistent/script.vope"}).code == 2);
}
