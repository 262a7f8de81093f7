#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "goalnet/ingest.hpp"

namespace goalnet {

inline constexpr std::size_t kNodeFeatureDim = 10;
using FeatureVector = std::array<double, kNodeFeatureDim>;

enum class Role { kGoalkeeper, kDefender, kMidfielder, kForward, kUnknown };
inline constexpr std::size_t kRoleCount = 5;
std::string_view to_string(Role r);
Role role_from_string(std::string_view s);  // lenient; unknown spellings -> kUnknown

// Season aggregate for one player. The ten statistics below, in this order,
// are the node features.
struct PlayerSeasonStats {
  PlayerId player_id = 0;
  double goals = 0;
  double successful_dribbles = 0;
  double tackles = 0;
  double accurate_pass_pct = 0;  // fraction
  double rating = 0;
  double goal_conversion_pct = 0;  // fraction
  double interceptions = 0;
  double clearances = 0;
  double accurate_passes = 0;
  double key_passes = 0;
  double minutes_played = 0;

  // Optional columns.
  std::string name;
  std::optional<TeamId> team_id;
  Role role = Role::kUnknown;

  FeatureVector features() const;
};

// Column names of the required CSV schema, in feature order, then minutes.
const std::vector<std::string>& player_stats_columns();
// Which of the ten features are counts (scaled per 90).
const std::array<bool, kNodeFeatureDim>& per90_feature_mask();

// Header must contain player_id, the ten statistics and minutes_played (any
// order); `name`, `team_id`, `position` are optional. Other columns are
// ignored.
std::map<PlayerId, PlayerSeasonStats> load_player_stats(const std::filesystem::path& csv);
std::map<PlayerId, PlayerSeasonStats> load_player_stats_text(std::string_view text);

// Count features scaled by 90 / minutes_played; percentages and rating
// untouched. Throws Error when minutes_played <= 0.
FeatureVector per90(const PlayerSeasonStats& s);

struct NormalizedFeatures {
  std::map<PlayerId, FeatureVector> features;  // every entry in [0,1]^10
  std::vector<PlayerId> excluded;              // minutes_played == 0
  FeatureVector population_mean{};             // mean of the normalized vectors
};

// Per-90 scaling followed by population min-max to [0,1]. A feature whose
// population range is zero is set to 0 for everyone.
NormalizedFeatures normalize_per90(const std::map<PlayerId, PlayerSeasonStats>& stats);

}  // namespace goalnet
