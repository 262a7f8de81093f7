#include <algorithm>
#include <string>

#include "doctest.h"
#include "goalnet/error.hpp"
#include "goalnet/stats.hpp"
#include "test_util.hpp"

using namespace goalnet;

namespace {

const std::string kHeader =
    "player_id,goals,successful_dribbles,tackles,accurate_pass_pct,rating,goal_conversion_pct,"
    "interceptions,clearances,accurate_passes,key_passes,minutes_played\n";

std::string row(int id, double goals, double minutes, double rating = 7.0) {
  return std::to_string(id) + "," + std::to_string(goals) + ",4,6,0.8," + std::to_string(rating) +
         ",0.2,3,2,100,5," + std::to_string(minutes) + "\n";
}

}  // namespace

TEST_CASE("header-only CSV gives an empty map") {
  CHECK(load_player_stats_text(kHeader).empty());
}

TEST_CASE("every data row becomes one entry") {
  std::string text = kHeader;
  for (int i = 1; i <= 547; ++i) text += row(i, i % 7, 900 + i);
  CHECK(load_player_stats_text(text).size() == 547);
}

TEST_CASE("missing column is a schema error naming it") {
  std::string header = kHeader;
  header.replace(header.find("tackles,"), 8, "");
  try {
    (void)load_player_stats_text(header);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("tackles") != std::string::npos);
  }
}

TEST_CASE("non-numeric cell reports its line") {
  std::string text = kHeader + row(1, 2, 900);
  std::string bad = row(2, 1, 900);
  bad.replace(bad.find(",4,"), 3, ",x,");
  text += bad;
  try {
    (void)load_player_stats_text(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("duplicate player id is an error naming the id") {
  const std::string text = kHeader + row(42, 1, 900) + row(42, 2, 900);
  try {
    (void)load_player_stats_text(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("42") != std::string::npos);
  }
}

TEST_CASE("two goals in 180 minutes is one per 90") {
  PlayerSeasonStats s;
  s.goals = 2;
  s.minutes_played = 180;
  s.rating = 7.5;
  const auto f = per90(s);
  CHECK(f[0] == 1.0);
  CHECK(f[4] == 7.5);  // ratings are not rescaled
  s.minutes_played = 0;
  CHECK_THROWS_AS((void)per90(s), Error);
}

TEST_CASE("min-max scaling matches a direct computation") {
  const std::string text = kHeader + row(1, 2, 180, 6.0) + row(2, 3, 90, 7.0) +
                           row(3, 0, 270, 8.0) + row(4, 5, 0, 9.0);
  const auto stats = load_player_stats_text(text);
  const auto n = normalize_per90(stats);
  CHECK(n.excluded == std::vector<PlayerId>{4});
  REQUIRE(n.features.size() == 3);
  // goals per 90: 1, 3, 0 -> (x - 0) / 3
  CHECK(n.features.at(1)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(n.features.at(2)[0] == 1.0);
  CHECK(n.features.at(3)[0] == 0.0);
  // rating 6, 7, 8 -> 0, .5, 1
  CHECK(n.features.at(2)[4] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(n.features.at(3)[4] == 1.0);
  // identical pass accuracy everywhere -> 0
  for (const auto& [id, f] : n.features) {
    CHECK(f[3] == 0.0);
    for (double v : f) CHECK((v >= 0.0 && v <= 1.0));
  }
  double mean0 = 0;
  for (const auto& [id, f] : n.features) mean0 += f[0] / 3.0;
  CHECK(n.population_mean[0] == doctest::Approx(mean0).epsilon(1e-15));
}

TEST_CASE("bundled player table loads with optional columns") {
  const auto stats = load_player_stats(testutil::fixture_dir() / "players.csv");
  CHECK(stats.size() == 32);
  CHECK_FALSE(stats.contains(311));
  const auto& gk = stats.at(101);
  CHECK(gk.role == Role::kGoalkeeper);
  CHECK(gk.team_id == 1);
  CHECK_FALSE(gk.name.empty());
}

TEST_CASE("role spellings are lenient") {
  CHECK(role_from_string("GK") == Role::kGoalkeeper);
  CHECK(role_from_string("FW") == Role::kForward);
  CHECK(role_from_string("libero-ish") == Role::kUnknown);
}
