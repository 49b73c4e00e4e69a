#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nartplan/coop.hpp"

using namespace nartplan;

namespace {

KnowledgeLedger random_ledger(std::mt19937& rng, int agents, int cells) {
  KnowledgeLedger ledger(agents, cells);
  std::uniform_int_distribution<int> count(0, 5);
  for (int i = 0; i < agents; ++i) {
    for (int n = 0; n < agents; ++n) {
      for (int c = 0; c < cells; ++c) {
        ledger.set_count(i, n, c, static_cast<std::uint32_t>(count(rng)));
      }
    }
  }
  return ledger;
}

}  // namespace

TEST_CASE("vom ramps from its minimum to a clamped 1") {
  VomClock clock{20.0, 20.0 / 3.0, 0};
  SUBCASE("right after an exchange") {
    double expected = 1.0 / (std::exp(3.0) - 1.0) - 1.0;  // -0.9476
    CHECK(vom_value(clock, 0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(vom_value(clock, 0) - (-0.9476)) < 1e-3);
  }
  SUBCASE("raw value exceeds 1 at tau and is clamped") {
    double raw = (2.0 * std::exp(3.0) - 1.0) / (std::exp(3.0) - 1.0) - 1.0;
    CHECK(raw == doctest::Approx(1.0524).epsilon(1e-3));
    CHECK(vom_value(clock, 20) == 1.0);
  }
  SUBCASE("far beyond tau it is exactly 1") {
    CHECK(vom_value(clock, 500) == 1.0);
  }
  SUBCASE("monotone non-decreasing over the ramp") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> tau_dist(1.0, 200.0);
    std::uniform_real_distribution<double> factor(0.1, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      double tau = tau_dist(rng);
      VomClock c{tau, factor(rng) * tau, 0};
      double prev = vom_value(c, 0);
      CHECK(prev >= -1.0);
      for (int s = 1; s <= static_cast<int>(tau) + 2; ++s) {
        double v = vom_value(c, s);
        CHECK(v >= prev - 1e-12);
        CHECK(v <= 1.0);
        prev = v;
      }
    }
  }
}

TEST_CASE("cooperation term is the signed product of desire and availability") {
  CHECK(cooperation_term(0.8, 0.5) == doctest::Approx(0.40));
  CHECK(cooperation_term(-0.9, -0.7) == doctest::Approx(0.63));
  CHECK(cooperation_term(1.0, -0.738) == doctest::Approx(-0.738));

  std::mt19937 rng(10);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    double vom = unit(rng);
    double csi = unit(rng);
    double c = cooperation_term(vom, csi);
    if (vom != 0.0 && csi != 0.0) {
      CHECK(std::signbit(c) == (std::signbit(vom) != std::signbit(csi)));
    }
  }
}

TEST_CASE("role-based combination weights the two peer classes") {
  CHECK(cooperation_term_role_based(0.4, -0.2, 0.3, 0.7) == doctest::Approx(-0.02));
  CHECK(cooperation_term_role_based(0.55, -0.9, 1.0, 0.0) == doctest::Approx(0.55));
  CHECK(cooperation_term_role_based(0.55, -0.9, 0.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("exchange detection thresholds at zero csi") {
  CsiMatrix m(4);
  m.set(1, 2, 0.3);
  m.set(1, 3, -0.2);
  auto pairs = detect_exchanges(m);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0] == std::pair<int, int>{1, 2});

  CsiMatrix clique(3);
  clique.set(0, 1, 0.1);
  clique.set(0, 2, 0.2);
  clique.set(1, 2, 0.0);
  CHECK(detect_exchanges(clique).size() == 3);

  CsiMatrix cold(3);
  cold.set(0, 1, -0.1);
  CHECK(detect_exchanges(cold).empty());
}

TEST_CASE("ledger merge takes elementwise maxima in both directions") {
  KnowledgeLedger ledger(2, 3);
  int c = 1;
  ledger.set_count(0, 0, c, 3);  // i's own visits
  ledger.set_count(1, 0, c, 1);  // j's stale view of i
  ledger.set_count(0, 1, c, 0);  // i's stale view of j
  ledger.set_count(1, 1, c, 2);  // j's own visits
  ledger.merge(0, 1);
  CHECK(ledger.count(0, 1, c) == 2);
  CHECK(ledger.count(1, 0, c) == 3);
  CHECK(ledger.rows_equal(0, 1));

  SUBCASE("merging identical rows changes nothing") {
    KnowledgeLedger copy = ledger;
    copy.merge(0, 1);
    for (int n = 0; n < 2; ++n) {
      for (int cc = 0; cc < 3; ++cc) {
        CHECK(copy.count(0, n, cc) == ledger.count(0, n, cc));
      }
    }
  }
}

TEST_CASE("merge obeys the semilattice laws") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    KnowledgeLedger base = random_ledger(rng, 3, 8);

    // Idempotence.
    KnowledgeLedger once = base;
    once.merge(0, 1);
    KnowledgeLedger twice = once;
    twice.merge(0, 1);
    CHECK(once.rows_equal(0, 1));
    bool same = true;
    for (int n = 0; n < 3 && same; ++n) {
      for (int c = 0; c < 8 && same; ++c) {
        same = twice.count(0, n, c) == once.count(0, n, c) &&
               twice.count(1, n, c) == once.count(1, n, c);
      }
    }
    CHECK(same);

    // Monotonicity: no entry decreases.
    for (int i = 0; i < 3; ++i) {
      for (int n = 0; n < 3; ++n) {
        for (int c = 0; c < 8; ++c) {
          CHECK(once.count(i, n, c) >= base.count(i, n, c));
        }
      }
    }

    // Row content is order-independent under snapshot application.
    KnowledgeLedger a = base;
    apply_step_exchanges(a, {{0, 1}, {1, 2}});
    KnowledgeLedger b = base;
    apply_step_exchanges(b, {{1, 2}, {0, 1}});
    for (int i = 0; i < 3; ++i) {
      for (int n = 0; n < 3; ++n) {
        for (int c = 0; c < 8; ++c) {
          CHECK(a.count(i, n, c) == b.count(i, n, c));
        }
      }
    }
  }
}

TEST_CASE("snapshot exchanges propagate one hop per step") {
  KnowledgeLedger ledger(3, 2);
  ledger.set_count(0, 0, 0, 5);
  // Chain 0-1, 1-2 in one step: 2 must not see 0's knowledge yet.
  apply_step_exchanges(ledger, {{0, 1}, {1, 2}});
  CHECK(ledger.count(1, 0, 0) == 5);
  CHECK(ledger.count(2, 0, 0) == 0);
  // Next step the hop completes.
  apply_step_exchanges(ledger, {{1, 2}});
  CHECK(ledger.count(2, 0, 0) == 5);
}

TEST_CASE("believed visits sum the team row") {
  KnowledgeLedger ledger(3, 4);
  CHECK(ledger.believed_visits(0, 2) == 0);
  ledger.set_count(0, 0, 2, 2);
  ledger.set_count(0, 1, 2, 1);
  ledger.set_count(0, 2, 2, 0);
  CHECK(ledger.believed_visits(0, 2) == 3);
}

TEST_CASE("a complete exchange round equalizes all beliefs") {
  std::mt19937 rng(33);
  KnowledgeLedger ledger(4, 6);
  std::uniform_int_distribution<int> count(0, 4);
  for (int i = 0; i < 4; ++i) {
    for (int c = 0; c < 6; ++c) {
      ledger.set_count(i, i, c, static_cast<std::uint32_t>(count(rng)));
    }
  }
  std::vector<std::pair<int, int>> all_pairs;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) all_pairs.emplace_back(i, j);
  }
  apply_step_exchanges(ledger, all_pairs);
  for (int i = 1; i < 4; ++i) CHECK(ledger.rows_equal(0, i));
  for (int c = 0; c < 6; ++c) {
    CHECK(ledger.believed_visits(0, c) == ledger.believed_visits(3, c));
  }
}
