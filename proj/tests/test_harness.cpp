#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fracheat/harness.hpp"

using namespace fracheat::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fracheat_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json solve_zero(const fs::path& out) {
  return {{"kind", "solve"},
          {"grid", {{"dim", 2}, {"half_width", 2.0}, {"points_per_axis", 32}}},
          {"params",
           {{"profile", {{"kind", "constant"}, {"scale", 0.0}}},
            {"max_leakage", 0.5},
            {"n_time", 16}}},
          {"output_dir", out.string()}};
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("kind names round trip") {
  for (Kind k : {Kind::norms, Kind::semigroup_rates, Kind::kernel_check, Kind::interp_check,
                 Kind::hardy_check, Kind::solve, Kind::threshold, Kind::acceptance})
    CHECK(kind_from_string(to_string(k)) == k);
  CHECK(std::string(to_string(Kind::semigroup_rates)) == "semigroup-rates");
}

TEST_CASE("solve with zero forcing") {
  const auto dir = scratch("zero");
  const auto out = run_document(solve_zero(dir).dump(), "");
  CHECK(out.exit_code == 0);
  CHECK(out.summary["results"]["verdict"] == "converged");
  CHECK(out.summary["results"]["iterations"] == 1);
  CHECK(fs::exists(dir / "summary.json"));
  const auto csv = slurp(dir / "iterations.csv");
  CHECK(csv.rfind("# schema=fracheat-v1\n", 0) == 0);
}

TEST_CASE("usage errors exit 1") {
  const auto dir = scratch("usage");
  auto doc = solve_zero(dir);
  doc["kind"] = "teleport";
  CHECK(run_document(doc.dump(), "").exit_code == 1);
  doc = solve_zero(dir);
  doc["params"]["frobnicate"] = 1;
  CHECK(run_document(doc.dump(), "").exit_code == 1);
  doc = solve_zero(dir);
  doc["grid"]["points_per_axis"] = 30;
  CHECK(run_document(doc.dump(), "").exit_code == 1);
  CHECK(run_document("{not json", "").exit_code == 1);
  doc = solve_zero(dir);
  doc["params"]["theta"] = 3.0;
  CHECK(run_document(doc.dump(), "").exit_code == 1);
}

TEST_CASE("failed assertions exit 2") {
  const auto dir = scratch("assert");
  auto doc = solve_zero(dir);
  doc["params"]["expect"] = "diverged";
  const auto out = run_document(doc.dump(), "");
  CHECK(out.exit_code == 2);
  CHECK(fs::exists(dir / "summary.json"));
}

TEST_CASE("overrides patch the document") {
  const auto dir = scratch("override");
  const auto out =
      run_document(solve_zero(dir).dump(), R"({"grid": {"points_per_axis": 16}, "seed": 7})");
  CHECK(out.exit_code == 0);
  CHECK(out.summary["grid"]["points_per_axis"] == 16);
  CHECK(out.summary["seed"] == 7);
}

TEST_CASE("rates CSV echoes parameters and is deterministic") {
  Json doc = {{"kind", "semigroup-rates"},
              {"name", "rates_1d"},
              {"grid", {{"dim", 1}, {"half_width", 256.0}, {"points_per_axis", 16384}}},
              {"params",
               {{"source", {{"kind", "delta"}}},
                {"theta", 1.0},
                {"r", 1.0},
                {"q", 2.0},
                {"t_min", 0.5},
                {"t_max", 5.0},
                {"max_leakage", 0.05}}},
              {"seed", 3}};
  const auto a = scratch("det_a"), b = scratch("det_b");
  doc["output_dir"] = a.string();
  const auto ra = run_document(doc.dump(), "");
  doc["output_dir"] = b.string();
  const auto rb = run_document(doc.dump(), "");
  CHECK(ra.exit_code == 0);
  CHECK(rb.exit_code == 0);
  CHECK(ra.summary["results"]["power_exponent"].get<double>() == doctest::Approx(-0.5).epsilon(0.05));
  const auto ca = slurp(a / "rates.csv"), cb = slurp(b / "rates.csv");
  CHECK(ca == cb);
  std::istringstream lines(ca);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "# schema=fracheat-v1");
  std::getline(lines, line);
  CHECK(line.rfind("experiment,kind,dim,L,M,seed,params,", 0) == 0);
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.rfind("rates_1d,semigroup-rates,1,256,16384,3,", 0) == 0);
    ++rows;
  }
  CHECK(rows == 9);
}

TEST_CASE("profile parsing") {
  const auto s = profile_from_json(Json{{"kind", "critical"}, {"theta", 1.0}}, 2);
  CHECK(s.p == 2.0);
  CHECK_THROWS(profile_from_json(Json{{"kind", "critical"}, {"p", 3.0}}, 2));
  CHECK_THROWS(profile_from_json(Json{{"kind", "blob"}}, 2));
  CHECK(std::isinf(profile_from_json(Json{{"kind", "power"}, {"exponent", -0.5},
                                          {"support_radius", "inf"}}, 1).support_radius));
}

}
