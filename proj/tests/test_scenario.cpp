#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nartplan/runner.hpp"
#include "nartplan/scenario.hpp"

using namespace nartplan;
namespace fs = std::filesystem;

namespace {

const char* kTinyScenario = R"(
# Small mission for fast end-to-end checks.
use_case = mug
map.kind = uniform
map.width = 8
map.height = 8
map.cell_size_m = 100
map.total_poc = 0.5
uav_count = 2
uav_energy = 300
trials = 2
seeds = 11 12
anneal.chains = 2
anneal.moves_per_temp = 25
anneal.cooling = 0.8
)";

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("nartplan_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("scenario parsing fills the use-case row") {
  Scenario sc = parse_scenario(kTinyScenario);
  CHECK(sc.use_case == UseCase::MUG);
  CHECK(sc.objective.w1 == 1.0);
  CHECK(sc.objective.w2 == 0.0);
  CHECK_FALSE(sc.objective.role_based);
  CHECK(sc.trials == 2);
  CHECK(sc.seeds.size() == 2);
  CHECK(sc.anneal.moves_per_temp == 25);

  std::vector<AgentSpec> roster = build_roster(sc, 0);
  REQUIRE(roster.size() == 2);
  CHECK(roster[0].roles.explorer);
  CHECK(roster[0].roles.relay);

  SUBCASE("baseline strips the relay role") {
    Scenario base = parse_scenario(std::string(kTinyScenario) +
                                   "\nuse_case = baseline\n");
    CHECK(base.objective.w1 == 0.0);
    CHECK(base.objective.w2 == 0.0);
    auto specs = build_roster(base, 0);
    CHECK_FALSE(specs[0].roles.relay);
    CHECK(specs.size() == 2);
  }
  SUBCASE("S-EE adds a static relay with per-trial placement") {
    Scenario see = parse_scenario(std::string(kTinyScenario) +
                                  "\nuse_case = see\nsee_positions = 4,4 0,4\n");
    CHECK(see.objective.w1 == 0.0);
    CHECK(see.objective.w2 == 1.0);
    auto t0 = build_roster(see, 0);
    auto t1 = build_roster(see, 1);
    auto t2 = build_roster(see, 2);
    REQUIRE(t0.size() == 3);
    CHECK(t0[2].kind == AgentKind::StaticEE);
    CHECK_FALSE(t0[2].roles.explorer);
    CHECK(t0[2].roles.relay);
    CHECK(*t0[2].fixed_position == CellIndex{4, 4});
    CHECK(*t1[2].fixed_position == CellIndex{0, 4});
    CHECK(*t2[2].fixed_position == CellIndex{4, 4});  // wraps around
  }
  SUBCASE("S-EE without explicit positions gets center plus edge midpoints") {
    Scenario see = parse_scenario(std::string(kTinyScenario) + "\nuse_case = see\n");
    CHECK(see.see_positions.size() == 5);
    CHECK(see.see_positions[0] == CellIndex{4, 4});
  }
  SUBCASE("M-EE rows differ only in the role-based flag") {
    Scenario m1 = parse_scenario(std::string(kTinyScenario) + "\nuse_case = mee1\n");
    Scenario m2 = parse_scenario(std::string(kTinyScenario) + "\nuse_case = mee2\n");
    CHECK(m1.objective.w1 == 0.3);
    CHECK(m1.objective.w2 == 0.7);
    CHECK_FALSE(m1.objective.role_based);
    CHECK(m2.objective.role_based);
    auto specs = build_roster(m1, 0);
    REQUIRE(specs.size() == 3);
    CHECK(specs[2].kind == AgentKind::MobileEE);
    CHECK(specs[0].roles.relay);
  }
}

TEST_CASE("scenario validation rejects broken inputs") {
  CHECK_THROWS_WITH_AS(parse_scenario("use_case = mug\nuav_count = 0\nseeds = 1\n"),
                       doctest::Contains("UAV"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(std::string(kTinyScenario) + "\nseeds = 1 2 3\n"),
                       doctest::Contains("seed list"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_scenario(std::string(kTinyScenario) + "\nbogus_key = 5\n"),
                       doctest::Contains("unknown key"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario("map.width = 8\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario(std::string(kTinyScenario) + "\nuse_case = warp\n"),
                  std::invalid_argument);
}

TEST_CASE("end-to-end run produces the full artifact set deterministically") {
  Scenario sc = parse_scenario(kTinyScenario);
  TempDir root("e2e");

  RunResult first = run_scenario(sc, (root.path / "a").string());
  REQUIRE(first.trials.size() == 2);
  for (const TrialResult& t : first.trials) {
    fs::path dir(t.directory);
    for (const char* name : {"metrics.json", "plan.csv", "connectivity.csv", "vom_trace.csv",
                             "eak_series.csv", "eik_series.csv"}) {
      CHECK(fs::exists(dir / name));
    }
  }
  CHECK(fs::exists(root.path / "a" / "manifest.json"));
  CHECK(fs::exists(root.path / "a" / "map.grid"));

  SUBCASE("rerun is byte-identical") {
    run_scenario(sc, (root.path / "b").string());
    for (int t = 0; t < 2; ++t) {
      fs::path rel = fs::path("trial_00" + std::to_string(t)) / "metrics.json";
      CHECK(slurp(root.path / "a" / rel) == slurp(root.path / "b" / rel));
    }
  }
  SUBCASE("parallel trials are byte-identical") {
    run_scenario(sc, (root.path / "p").string(), 4);
    for (int t = 0; t < 2; ++t) {
      fs::path rel = fs::path("trial_00" + std::to_string(t)) / "metrics.json";
      CHECK(slurp(root.path / "a" / rel) == slurp(root.path / "p" / rel));
    }
  }
  SUBCASE("comparison of identical runs shows zero gaps") {
    run_scenario(sc, (root.path / "c").string());
    fs::path table = root.path / "cmp.csv";
    compare_runs({(root.path / "a").string(), (root.path / "c").string()}, table.string());
    std::string csv = slurp(table);
    CHECK(csv.find("metric,run,mean,min,max,gap_vs_baseline_pct") != std::string::npos);
    std::istringstream lines(csv);
    std::string row;
    std::getline(lines, row);  // header
    while (std::getline(lines, row)) {
      auto last_comma = row.rfind(',');
      std::string gap = row.substr(last_comma + 1);
      if (!gap.empty()) {
        CHECK(std::abs(std::stod(gap)) < 1e-12);
      }
    }
  }
  SUBCASE("comparison requires two runs and complete metric files") {
    CHECK_THROWS_AS(compare_runs({(root.path / "a").string()}, (root.path / "x.csv").string()),
                    std::invalid_argument);
    fs::remove(fs::path(first.trials[1].directory) / "metrics.json");
    run_scenario(sc, (root.path / "d").string());
    CHECK_THROWS_WITH_AS(
        compare_runs({(root.path / "a").string(), (root.path / "d").string()},
                     (root.path / "y.csv").string()),
        doctest::Contains("missing"), std::runtime_error);
  }
}
