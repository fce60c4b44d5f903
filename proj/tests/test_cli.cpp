#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
  const char* p = std::getenv("VGCHAOS_CLI");
  if (p == nullptr) throw std::runtime_error("VGCHAOS_CLI must point at the CLI binary");
  return p;
}

int run(const std::string& args) {
  int rc = std::system((cli_path() + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f.good()) throw std::runtime_error("missing output file " + p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path tmp_dir(const std::string& tag) {
  auto d = std::filesystem::temp_directory_path() / ("vgchaos_cli_test_" + tag);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("exit code contract") {
  CHECK(run("vg-info --r 2 --theta 0 --sigma 1") == 0);
  CHECK(run("no-such-command") == 2);
  CHECK(run("vg-info --r 2") == 2);                                   // missing required flags
  CHECK(run("vg-info --r -3 --theta 0 --sigma 1") == 4);              // bad parameter
  CHECK(run("stein-solve --r 2 --theta 0 --sigma 1 --h cube") == 4);  // unknown test function
  CHECK(run("rosenblatt-rate --case b --rho 1.5 --n-mc 100 --seed 1") == 4);
  CHECK(run("chaos-cumulants --eigenvalues 0.5,-0.5 --n-mc 100") == 4);  // seed required with MC
  CHECK(run("bound-report --eigenvalues 0.9,-0.5 --r 1 --theta 0 --sigma 1 --n-mc 100 --seed 1") ==
        4);  // variance mismatch without --rescale
}

TEST_CASE("reports embed schema, version, and config hash") {
  auto d = tmp_dir("stamp");
  REQUIRE(run("vg-info --r 2 --theta 0 --sigma 1 --out " + d.string()) == 0);
  auto body = slurp(d / "vg_info.json");
  CHECK(body.find("\"schema_version\"") != std::string::npos);
  CHECK(body.find("\"library_version\"") != std::string::npos);
  CHECK(body.find("\"config_hash\"") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
  auto d1 = tmp_dir("det1"), d2 = tmp_dir("det2");
  std::string args = "bound-report --eigenvalues 0.5,-0.5 --r 1 --theta 0 --sigma 1"
                     " --n-mc 4000 --seed 9 --out ";
  REQUIRE(run(args + d1.string()) == 0);
  REQUIRE(run(args + d2.string()) == 0);
  CHECK(slurp(d1 / "bound_report.json") == slurp(d2 / "bound_report.json"));
}

TEST_CASE("different seeds give different artifacts") {
  auto d1 = tmp_dir("seed1"), d2 = tmp_dir("seed2");
  std::string base = "bound-report --eigenvalues 0.5,-0.5 --r 1 --theta 0 --sigma 1 --n-mc 4000";
  REQUIRE(run(base + " --seed 9 --out " + d1.string()) == 0);
  REQUIRE(run(base + " --seed 10 --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "bound_report.json") != slurp(d2 / "bound_report.json"));
}

TEST_CASE("config file overrides flags") {
  auto d = tmp_dir("cfg");
  auto cfg = std::filesystem::temp_directory_path() / "vgchaos_cli_test.cfg";
  std::ofstream(cfg) << "theta = 0.5\n# comment line\n";
  REQUIRE(run("vg-info --r 2 --theta 0 --sigma 1 --config " + cfg.string() + " --out " + d.string()) == 0);
  auto body = slurp(d / "vg_info.json");
  CHECK(body.find("\"theta\": 0.5") != std::string::npos);
}

TEST_CASE("density grid CSV has the requested shape") {
  auto d = tmp_dir("grid");
  REQUIRE(run("vg-info --r 2 --theta 0 --sigma 1 --density-grid -2:2:5 --out " + d.string()) == 0);
  auto body = slurp(d / "vg_density.csv");
  int lines = 0;
  for (char c : body)
    if (c == '\n') ++lines;
  CHECK(lines == 7);  // stamp + header + 5 rows
  CHECK(body.find("x,density") != std::string::npos);
  CHECK(body.find("\n0,0.5\n") != std::string::npos);  // Laplace value at the origin
}

TEST_CASE("stein CSV output") {
  auto d = tmp_dir("stein");
  REQUIRE(run("stein-solve --r 1 --theta 0 --sigma 1 --h x --out " + d.string()) == 0);
  auto body = slurp(d / "stein_solution.csv");
  CHECK(body.find("x,f,f1,f2,residual") != std::string::npos);
}
