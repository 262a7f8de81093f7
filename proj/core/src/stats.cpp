#include "goalnet/stats.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "goalnet/error.hpp"

namespace goalnet {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::kGoalkeeper: return "GK";
    case Role::kDefender: return "DF";
    case Role::kMidfielder: return "MF";
    case Role::kForward: return "FW";
    case Role::kUnknown: return "unknown";
  }
  return "unknown";
}

Role role_from_string(std::string_view s) {
  std::string u;
  for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "GK" || u == "G" || u == "GOALKEEPER") return Role::kGoalkeeper;
  if (u == "DF" || u == "D" || u == "DEFENDER") return Role::kDefender;
  if (u == "MF" || u == "M" || u == "MIDFIELDER") return Role::kMidfielder;
  if (u == "FW" || u == "F" || u == "FORWARD") return Role::kForward;
  return Role::kUnknown;
}

FeatureVector PlayerSeasonStats::features() const {
  return {goals,         successful_dribbles, tackles,     accurate_pass_pct, rating,
          goal_conversion_pct, interceptions, clearances, accurate_passes,   key_passes};
}

const std::vector<std::string>& player_stats_columns() {
  static const std::vector<std::string> cols{
      "goals",          "successful_dribbles", "tackles",    "accurate_pass_pct",
      "rating",         "goal_conversion_pct", "interceptions", "clearances",
      "accurate_passes", "key_passes",         "minutes_played"};
  return cols;
}

const std::array<bool, kNodeFeatureDim>& per90_feature_mask() {
  static const std::array<bool, kNodeFeatureDim> mask{true, true, true, false, false,
                                                      false, true, true, true,  true};
  return mask;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* b = cell.data();
  const char* e = cell.data() + cell.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e || cell.empty()) {
    throw ParseError("line " + std::to_string(line) + ": column '" + column +
                     "' is not numeric ('" + cell + "')");
  }
  return v;
}

}  // namespace

std::map<PlayerId, PlayerSeasonStats> load_player_stats_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("player stats CSV is empty (no header)");
  const auto header = split_csv_line(line);
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

  std::vector<std::string> required{"player_id"};
  for (const auto& c : player_stats_columns()) required.push_back(c);
  for (const auto& c : required) {
    if (!col.contains(c)) throw SchemaError("player stats CSV: missing column '" + c + "'");
  }

  std::map<PlayerId, PlayerSeasonStats> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    auto num = [&](const std::string& c) { return parse_number(cells[col.at(c)], line_no, c); };

    PlayerSeasonStats s;
    const double id = num("player_id");
    s.player_id = static_cast<PlayerId>(id);
    if (static_cast<double>(s.player_id) != id) {
      throw ParseError("line " + std::to_string(line_no) + ": player_id must be an integer");
    }
    s.goals = num("goals");
    s.successful_dribbles = num("successful_dribbles");
    s.tackles = num("tackles");
    s.accurate_pass_pct = num("accurate_pass_pct");
    s.rating = num("rating");
    s.goal_conversion_pct = num("goal_conversion_pct");
    s.interceptions = num("interceptions");
    s.clearances = num("clearances");
    s.accurate_passes = num("accurate_passes");
    s.key_passes = num("key_passes");
    s.minutes_played = num("minutes_played");

    const auto f = s.features();
    for (std::size_t i = 0; i < kNodeFeatureDim; ++i) {
      const std::string& name = player_stats_columns()[i];
      if (f[i] < 0.0) {
        throw ParseError("line " + std::to_string(line_no) + ": column '" + name +
                         "' must be >= 0");
      }
      if (name.ends_with("_pct") && f[i] > 1.0) {
        throw ParseError("line " + std::to_string(line_no) + ": column '" + name +
                         "' must be a fraction in [0,1]");
      }
    }
    if (s.minutes_played < 0.0) {
      throw ParseError("line " + std::to_string(line_no) + ": minutes_played must be >= 0");
    }
    if (auto it = col.find("name"); it != col.end()) s.name = cells[it->second];
    if (auto it = col.find("team_id"); it != col.end() && !cells[it->second].empty()) {
      s.team_id = static_cast<TeamId>(parse_number(cells[it->second], line_no, "team_id"));
    }
    if (auto it = col.find("position"); it != col.end()) s.role = role_from_string(cells[it->second]);

    if (!out.emplace(s.player_id, s).second) {
      throw ParseError("duplicate player id " + std::to_string(s.player_id) + " at line " +
                       std::to_string(line_no));
    }
  }
  return out;
}

std::map<PlayerId, PlayerSeasonStats> load_player_stats(const std::filesystem::path& csv) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw ParseError("cannot open player stats " + csv.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return load_player_stats_text(buf.str());
  } catch (const SchemaError& e) {
    throw SchemaError(csv.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(csv.string() + ": " + e.what());
  }
}

FeatureVector per90(const PlayerSeasonStats& s) {
  if (!(s.minutes_played > 0.0)) {
    throw Error("per90: player " + std::to_string(s.player_id) + " has no minutes played");
  }
  FeatureVector f = s.features();
  const double k = 90.0 / s.minutes_played;
  for (std::size_t i = 0; i < kNodeFeatureDim; ++i) {
    if (per90_feature_mask()[i]) f[i] *= k;
  }
  return f;
}

NormalizedFeatures normalize_per90(const std::map<PlayerId, PlayerSeasonStats>& stats) {
  NormalizedFeatures out;
  std::map<PlayerId, FeatureVector> raw;
  for (const auto& [id, s] : stats) {
    if (s.minutes_played > 0.0) {
      raw.emplace(id, per90(s));
    } else {
      out.excluded.push_back(id);
    }
  }
  if (raw.empty()) return out;

  FeatureVector lo;
  FeatureVector hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& [id, f] : raw) {
    for (std::size_t i = 0; i < kNodeFeatureDim; ++i) {
      lo[i] = std::min(lo[i], f[i]);
      hi[i] = std::max(hi[i], f[i]);
    }
  }
  for (const auto& [id, f] : raw) {
    FeatureVector n{};
    for (std::size_t i = 0; i < kNodeFeatureDim; ++i) {
      const double range = hi[i] - lo[i];
      n[i] = range > 0.0 ? std::clamp((f[i] - lo[i]) / range, 0.0, 1.0) : 0.0;
      out.population_mean[i] += n[i];
    }
    out.features.emplace(id, n);
  }
  for (double& m : out.population_mean) m /= static_cast<double>(out.features.size());
  return out;
}

}  // namespace goalnet
