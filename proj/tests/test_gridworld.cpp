#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "nartplan/gridworld.hpp"

using namespace nartplan;

TEST_CASE("cell centers sit at half-cell offsets") {
  GridWorld g(10, 10, 10.0);
  Point2 p = cell_center(g, CellIndex{0, 0});
  CHECK(p.x == doctest::Approx(5.0));
  CHECK(p.y == doctest::Approx(5.0));

  p = cell_center(g, CellIndex{3, 2});
  CHECK(p.x == doctest::Approx(35.0));
  CHECK(p.y == doctest::Approx(25.0));

  GridWorld unit(4, 4, 1.0);
  p = cell_center(unit, CellIndex{0, 0});
  CHECK(p.x == doctest::Approx(0.5));
  CHECK(p.y == doctest::Approx(0.5));

  CHECK_THROWS_AS(cell_center(g, CellIndex{10, 0}), std::invalid_argument);
  CHECK_THROWS_AS(cell_center(g, CellIndex{-1, 3}), std::invalid_argument);
}

TEST_CASE("neighbors honor bounds, mask, and adjacency mode") {
  GridWorld g(5, 5, 1.0);
  CHECK(neighbors(g, CellIndex{2, 2}).size() == 8);
  CHECK(neighbors(g, CellIndex{0, 0}).size() == 3);

  // Interior cell fenced off by invalid cells.
  GridWorld fenced(5, 5, 1.0);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      fenced.set_cell(CellIndex{2 + dc, 2 + dr}, 0.0, false);
    }
  }
  CHECK(neighbors(fenced, CellIndex{2, 2}).empty());

  GridWorld four(5, 5, 1.0);
  four.set_adjacency(Adjacency::Four);
  CHECK(neighbors(four, CellIndex{2, 2}).size() == 4);
  CHECK(neighbors(four, CellIndex{0, 0}).size() == 2);

  CHECK_THROWS_AS(neighbors(g, CellIndex{7, 7}), std::invalid_argument);
}

TEST_CASE("neighbor order is row-major and the relation is symmetric") {
  GridWorld g(6, 6, 1.0);
  auto ns = neighbors(g, CellIndex{2, 2});
  for (size_t k = 1; k < ns.size(); ++k) {
    CHECK(g.index_of(ns[k - 1]) < g.index_of(ns[k]));
  }

  std::mt19937 rng(42);
  std::uniform_int_distribution<int> coord(0, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GridWorld masked(6, 6, 1.0);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      if (unit(rng) < 0.2) masked.set_cell(CellIndex{c, r}, 0.0, false);
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    CellIndex a{coord(rng), coord(rng)};
    if (!masked.is_valid(a)) continue;
    for (CellIndex b : neighbors(masked, a)) {
      CHECK(masked.is_valid(b));
      auto back = neighbors(masked, b);
      CHECK(std::find(back.begin(), back.end(), a) != back.end());
    }
  }
}

TEST_CASE("uniform map spreads the total mass evenly") {
  GridWorld g = make_uniform_map(10, 10, 10.0, 0.648);
  CHECK(g.poc(CellIndex{4, 7}) == doctest::Approx(0.00648).epsilon(1e-12));
  CHECK(g.total_poc() == doctest::Approx(0.648).epsilon(1e-12));
}

TEST_CASE("map loader enforces invariants") {
  SUBCASE("per-cell poc above 1 is rejected with the cell coordinate") {
    std::istringstream in("grid 2 2 10\n0.1 1.2\n0.1 0.1\n");
    CHECK_THROWS_WITH_AS(load_poc_map(in), doctest::Contains("(1,0)"), std::invalid_argument);
  }
  SUBCASE("all-invalid map is rejected") {
    std::istringstream in("grid 2 1 10\n-1 -1\n");
    CHECK_THROWS_WITH_AS(load_poc_map(in), doctest::Contains("no valid cells"),
                         std::invalid_argument);
  }
  SUBCASE("total poc above 1 is rejected") {
    std::istringstream in("grid 2 1 10\n0.7 0.7\n");
    CHECK_THROWS_AS(load_poc_map(in), std::invalid_argument);
  }
  SUBCASE("missing values are a parse error") {
    std::istringstream in("grid 3 2 10\n0.1 0.1\n");
    CHECK_THROWS_AS(load_poc_map(in), std::runtime_error);
  }
}

TEST_CASE("save/load round-trip is bit-identical") {
  GridWorld g = make_clustered_map(12, 9, 25.0, 0.5, 7);
  g.set_cell(CellIndex{3, 3}, 0.0, false);
  g.set_cell(CellIndex{10, 7}, 0.0, false);
  // Renormalize is not needed; masking only removes mass.
  std::ostringstream out;
  save_poc_map(g, out);
  std::istringstream in(out.str());
  GridWorld h = load_poc_map(in);
  REQUIRE(h.width() == g.width());
  REQUIRE(h.height() == g.height());
  CHECK(h.cell_size() == g.cell_size());
  for (int c = 0; c < g.cell_count(); ++c) {
    CHECK(h.poc_at(c) == g.poc_at(c));
    CHECK(h.valid_mask()[c] == g.valid_mask()[c]);
  }
  CHECK(h.aoi_vertices().size() == g.aoi_vertices().size());

  std::ostringstream out2;
  save_poc_map(h, out2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("clustered generator is seeded and normalized") {
  GridWorld a = make_clustered_map(20, 20, 100.0, 0.648, 3);
  GridWorld b = make_clustered_map(20, 20, 100.0, 0.648, 3);
  GridWorld c = make_clustered_map(20, 20, 100.0, 0.648, 4);
  CHECK(a.total_poc() == doctest::Approx(0.648).epsilon(1e-9));
  bool same = true;
  bool differs = false;
  for (int i = 0; i < a.cell_count(); ++i) {
    same = same && a.poc_at(i) == b.poc_at(i);
    differs = differs || a.poc_at(i) != c.poc_at(i);
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("frontier distance measures rings from the boundary") {
  GridWorld g(10, 10, 1.0);
  CHECK(g.frontier_distance(CellIndex{0, 5}) == 0);
  CHECK(g.frontier_distance(CellIndex{1, 1}) == 1);
  CHECK(g.frontier_distance(CellIndex{5, 4}) == 4);
  g.set_cell(CellIndex{5, 5}, 0.0, false);
  CHECK(g.frontier_distance(CellIndex{5, 4}) == 1);
}
