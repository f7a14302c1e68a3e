#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cheegerlab/battery.hpp"
#include "cheegerlab/cli.hpp"
#include "cheegerlab/error.hpp"
#include "cheegerlab/sweep.hpp"

using namespace cheegerlab;

namespace {

BatteryOptions small_battery() {
  BatteryOptions b;
  b.domains = {"unit-disk", "l-shape"};
  b.pairs = {{2, 1}, {kInfinity, 2}};
  b.resolution = 32;
  b.min_short_cells = 8;
  b.monotonicity_domains = {"unit-disk"};
  b.monotonicity_p = {1, 2, 3};
  b.one_d_lengths = {1.0};
  b.one_d_nodes = 400;
  return b;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cheegerlab_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("default battery contents") {
  CHECK(default_battery_domains().size() == 9);
  CHECK(default_battery_pairs().size() == 6);
  ExperimentConfig c;
  CHECK(battery_from_config(c).domains == default_battery_domains());
  c.battery = "unit-disk,annulus";
  CHECK(battery_from_config(c).domains == std::vector<std::string>{"unit-disk", "annulus"});
  c.battery = "none";
  CHECK(battery_from_config(c).domains.empty());
}

TEST_CASE("small battery passes and its negative control fails") {
  BatteryOptions b = small_battery();
  const CheckReport r = run_battery(b);
  CHECK(!r.rows.empty());
  for (const Check& row : r.rows) {
    INFO(row.name << " " << row.domain << " lhs=" << row.lhs << " rhs=" << row.rhs);
    CHECK(row.pass);
  }
  auto has = [&](const std::string& name) {
    return std::any_of(r.rows.begin(), r.rows.end(), [&](const Check& c) { return c.name == name; });
  };
  for (const char* name : {"generalized", "cheeger", "convex_lower", "convex_upper", "monotonicity", "scaling", "one_d"})
    CHECK(has(name));

  b.monotonicity_slack = -0.5;
  const CheckReport neg = run_battery(b);
  std::size_t mono_fail = 0;
  for (const Check& row : neg.rows)
    if (row.name == "monotonicity" && !row.pass) ++mono_fail;
  CHECK(mono_fail > 0);
  CHECK(!neg.all_passed());

  b.domains.clear();
  CHECK_THROWS_WITH_AS(run_battery(b), "nothing to verify", InvalidArgument);
}

TEST_CASE("sweep rows are sorted and order independent") {
  SweepOptions o;
  o.resolution = 32;
  o.min_short_cells = 8;
  const SweepReport a = run_sweep({"unit-square", "unit-disk"}, {2}, {1}, o);
  const SweepReport b = run_sweep({"unit-disk", "unit-square"}, {2}, {1}, o);
  REQUIRE(a.rows.size() == 2);
  CHECK(a.rows[0].domain == "unit-disk");
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].domain == b.rows[k].domain);
    CHECK(a.rows[k].F == b.rows[k].F);
    CHECK(a.rows[k].ok());
    CHECK(a.rows[k].F == a.rows[k].lambda_root_p / a.rows[k].lambda_root_q);
  }
  REQUIRE(a.summaries.size() == 1);
  CHECK(a.summaries[0].min_domain == "unit-square");
  CHECK(a.summaries[0].max_domain == "unit-disk");
  CHECK(!a.summaries[0].note.empty());

  CHECK(run_sweep({"unit-disk"}, {2}, {2}, o).rows.size() == 1);
  CHECK_THROWS_AS(run_sweep({"unit-disk"}, {1}, {2}, o), InvalidArgument);
  CHECK_THROWS_AS(run_sweep({}, {2}, {1}, o), InvalidArgument);
}

TEST_CASE("a failing sweep row does not abort the others") {
  SweepOptions o;
  o.resolution = 32;
  o.min_short_cells = 8;
  const SweepReport r = run_sweep({"unit-disk", "polygon:0,0,1,0"}, {2}, {1}, o);
  REQUIRE(r.rows.size() == 2);
  std::size_t ok = 0;
  for (const SweepRow& row : r.rows) ok += row.ok();
  CHECK(ok == 1);
}

TEST_CASE("cli exit codes and outputs") {
  std::ostringstream out, err;
  const auto dir = scratch("ratio");
  CHECK(run_cli({"cheegerlab", "ratio", "--shape", "disk:0.5,0.5,0.4", "--grid", "48", "--p", "2", "--q", "1", "--out", dir.string()},
                out, err) == 0);
  CHECK(std::filesystem::exists(dir / "report.csv"));
  CHECK(std::filesystem::exists(dir / "checks.csv"));
  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("seed=7") != std::string::npos);
  CHECK(slurp(dir / "report.csv").rfind("domain,", 0) == 0);
  std::filesystem::remove_all(dir);

  std::ostringstream o2, e2;
  CHECK(run_cli({"cheegerlab", "ratio", "--p", "1", "--q", "2", "--out", scratch("bad").string()}, o2, e2) == 2);
  CHECK(e2.str().find("regime q ≤ p only") != std::string::npos);

  std::ostringstream o3, e3;
  CHECK(run_cli({"cheegerlab", "frobnicate"}, o3, e3) == 2);
  CHECK(!(o3.str() + e3.str()).empty());

  std::ostringstream o4, e4;
  CHECK(run_cli({"cheegerlab"}, o4, e4) == 2);

  std::ostringstream o5, e5;
  CHECK(run_cli({"cheegerlab", "verify", "--battery", "none", "--out", scratch("none").string()}, o5, e5) == 2);

  std::ostringstream o6, e6;
  CHECK(run_cli({"cheegerlab", "ratio", "--grid", "4", "--out", scratch("tiny").string()}, o6, e6) == 2);
}

TEST_CASE("cli commands write their files") {
  const auto dir = scratch("cmds");
  std::ostringstream out, err;
  CHECK(run_cli({"cheegerlab", "eigen", "--shape", "unit-square", "--grid", "24", "--out", (dir / "e").string()}, out, err) == 0);
  CHECK(std::filesystem::exists(dir / "e" / "field_eigen.pgm"));
  CHECK(run_cli({"cheegerlab", "cheeger", "--shape", "unit-square", "--grid", "24", "--mode", "anisotropic", "--out",
                 (dir / "c").string()},
                out, err) == 0);
  CHECK(std::filesystem::exists(dir / "c" / "mask_cheeger.pgm"));
  CHECK(run_cli({"cheegerlab", "torsion", "--shape", "unit-disk", "--grid", "24", "--out", (dir / "t").string()}, out, err) == 0);
  CHECK(std::filesystem::exists(dir / "t" / "field_torsion.csv"));
  CHECK(run_cli({"cheegerlab", "optimize", "--grid", "16", "--steps", "3", "--inner-iterations", "100", "--out",
                 (dir / "o").string()},
                out, err) == 0);
  CHECK(std::filesystem::exists(dir / "o" / "trace.csv"));
  CHECK(std::filesystem::exists(dir / "o" / "mask_best.pgm"));
  CHECK(run_cli({"cheegerlab", "puncture", "--p", "inf", "--q", "1", "--grid", "32", "--n", "0", "--n", "3", "--out",
                 (dir / "n").string()},
                out, err) == 0);
  CHECK(std::filesystem::exists(dir / "n" / "report.csv"));
  INFO(err.str());
  std::filesystem::remove_all(dir);
}
