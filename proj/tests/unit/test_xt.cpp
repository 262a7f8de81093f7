#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "goalnet/error.hpp"
#include "goalnet/ingest.hpp"
#include "goalnet/xt.hpp"
#include "test_util.hpp"

using namespace goalnet;

namespace {

XtGrid toy_grid() {
  XtGrid g = make_empty_grid(2, 1);
  g.move_prob[0] = 1.0;  // A moves to B
  g.transition_at(0, 1) = 1.0;
  g.shot_prob[1] = 1.0;  // B always shoots
  g.goal_prob_given_shot[1] = 0.3;
  return g;
}

// Direct fixed-point iteration written out independently of apply_xt_map.
std::vector<double> iterate_by_hand(const XtGrid& g, std::size_t steps) {
  const std::size_t z = g.zones();
  std::vector<double> v(z, 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<double> next(z);
    for (std::size_t i = 0; i < z; ++i) {
      double flow = 0;
      for (std::size_t j = 0; j < z; ++j) flow += g.transition[i * z + j] * v[j];
      next[i] = g.shot_prob[i] * g.goal_prob_given_shot[i] + g.move_prob[i] * flow;
    }
    v = next;
  }
  return v;
}

XtGrid random_valid_grid(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t nx = 1 + rng() % 5, ny = 1 + rng() % 4;
  XtGrid g = make_empty_grid(nx, ny);
  for (std::size_t i = 0; i < g.zones(); ++i) {
    // keep some shot probability everywhere so the map contracts
    g.shot_prob[i] = 0.05 + 0.9 * u(rng);
    g.move_prob[i] = 1.0 - g.shot_prob[i];
    g.goal_prob_given_shot[i] = u(rng);
    double total = 0;
    for (std::size_t j = 0; j < g.zones(); ++j) total += g.transition_at(i, j) = u(rng);
    for (std::size_t j = 0; j < g.zones(); ++j) g.transition_at(i, j) /= total;
  }
  return g;
}

}  // namespace

TEST_CASE("toy 1x2 grid converges to [0.3, 0.3]") {
  XtGrid g = toy_grid();
  solve_values(g, 1e-8);
  const auto oracle = iterate_by_hand(g, 50);
  CHECK(std::abs(oracle[0] - 0.3) <= 1e-12);
  CHECK(std::abs(oracle[1] - 0.3) <= 1e-12);
  CHECK(std::abs(g.value[0] - 0.3) <= 1e-8);
  CHECK(std::abs(g.value[1] - 0.3) <= 1e-8);
  CHECK(g.residual < 1e-8);
  CHECK(fixed_point_residual(g) < 1e-8);
}

TEST_CASE("always shooting with goal probability g gives g everywhere") {
  XtGrid grid = make_empty_grid(4, 3);
  for (std::size_t i = 0; i < grid.zones(); ++i) {
    grid.shot_prob[i] = 1.0;
    grid.goal_prob_given_shot[i] = 0.17;
  }
  solve_values(grid);
  for (double v : grid.value) CHECK(v == doctest::Approx(0.17).epsilon(1e-12));
}

TEST_CASE("random valid grids converge monotonically from zero") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    XtGrid g = random_valid_grid(rng);
    std::vector<double> v(g.zones(), 0.0);
    for (int step = 0; step < 200; ++step) {
      const auto next = apply_xt_map(g, v);
      for (std::size_t i = 0; i < v.size(); ++i) CHECK(next[i] >= v[i] - 1e-15);
      v = next;
    }
    solve_values(g, 1e-10, 10000);
    const auto oracle = iterate_by_hand(g, 2000);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(g.value[i] <= oracle[i] + 1e-12);
      CHECK(std::abs(g.value[i] - oracle[i]) <= 1e-8);
    }
  }
}

TEST_CASE("non-convergence reports the residual") {
  XtGrid g = make_empty_grid(2, 1);
  g.move_prob = {1.0, 0.0};
  g.shot_prob = {0.0, 1.0};
  g.goal_prob_given_shot = {0.0, 1.0};
  g.transition_at(0, 0) = 0.999;
  g.transition_at(0, 1) = 0.001;
  try {
    solve_values(g, 1e-12, 5);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("zone lookup: boundary, interior and clamping") {
  XtGrid g = toy_grid();
  g.value = {0.1, 0.3};
  CHECK(g.value_at({52.5, 34.0}) == 0.3);  // centre belongs to B
  CHECK(g.value_at({10.0, 34.0}) == 0.1);
  std::size_t oob = 0;
  CHECK(g.zone_of({-1.0, 34.0}, &oob) == 0);
  CHECK(oob == 1);
  CHECK(g.zone_of({105.0, 68.0}, &oob) == 1);  // far touchline stays in the last bin
  CHECK(oob == 1);
}

TEST_CASE("delta xT worked examples") {
  CHECK(delta_xt(true, 0.02, 0.05) == doctest::Approx(0.03).epsilon(1e-15));
  CHECK(delta_xt(false, 0.02, 0.05) == doctest::Approx(0.07).epsilon(1e-15));
  CHECK(delta_xt(true, 0.04, 0.04) == 0.0);
}

TEST_CASE("delta xT branches over a lattice of values") {
  for (int team_prev = 1; team_prev <= 2; ++team_prev)
    for (int team_cur = 1; team_cur <= 2; ++team_cur)
      for (int a = 0; a <= 20; ++a)
        for (int b = 0; b <= 20; ++b) {
          const double prev = a / 20.0, cur = b / 20.0;
          const auto label = label_delta_xt(9, {team_prev, prev}, {team_cur, cur});
          const double expected = team_prev == team_cur ? cur - prev : cur + prev;
          CHECK(label.delta_xt == expected);
          CHECK(label.xt_value == cur);
          CHECK(label.event_id == 9);
        }
}

TEST_CASE("first action of each period uses zero on the same-team branch") {
  XtGrid g = toy_grid();
  g.value = {0.1, 0.3};
  std::vector<SpadlAction> m(3);
  m[0] = {.game_id = 1, .period = 1, .team_id = 1, .end_x = 80};
  m[1] = {.game_id = 1, .period = 1, .team_id = 2, .end_x = 20};
  m[2] = {.game_id = 1, .period = 2, .team_id = 2, .end_x = 20};
  const auto labels = label_match(m, g);
  CHECK(labels[0].delta_xt == 0.3);
  CHECK(labels[1].delta_xt == doctest::Approx(0.4));
  CHECK(labels[2].delta_xt == 0.1);
  CHECK(labels[2].event_id == make_event_id(1, 2));
}

TEST_CASE("fitted fixture grid is a valid model and round trips") {
  std::vector<SpadlAction> all;
  for (const char* f : {"100001.json", "100002.json"}) {
    const auto a = to_spadl(parse_events(testutil::fixture_dir() / "events" / f));
    all.insert(all.end(), a.begin(), a.end());
  }
  const XtGrid g = fit_grid(all, 16, 12);
  for (std::size_t i = 0; i < g.zones(); ++i) {
    CHECK(g.shot_prob[i] + g.move_prob[i] == doctest::Approx(1.0));
    CHECK((g.value[i] >= 0.0 && g.value[i] <= 1.0));
    double row = 0;
    for (std::size_t j = 0; j < g.zones(); ++j) row += g.transition_at(i, j);
    if (g.move_prob[i] > 0) CHECK(row == doctest::Approx(1.0));
  }
  CHECK_FALSE(g.flagged_zones.empty());  // two matches leave empty zones
  CHECK(fixed_point_residual(g) < 1e-8);
  std::stringstream buf;
  write_grid_json(buf, g);
  const XtGrid back = read_grid_json(buf);
  CHECK(back.value == g.value);
  CHECK(back.transition == g.transition);
  CHECK_THROWS_AS((void)fit_grid({}, 4, 4), Error);
}
