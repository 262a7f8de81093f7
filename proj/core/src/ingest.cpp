#include "goalnet/ingest.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "goalnet/error.hpp"
#include "json.hpp"

namespace goalnet {

using nlohmann::json;

std::string_view to_string(EventType t) {
  switch (t) {
    case EventType::kPass: return "pass";
    case EventType::kShot: return "shot";
    case EventType::kDribble: return "dribble";
    case EventType::kTackle: return "tackle";
    case EventType::kInterception: return "interception";
    case EventType::kClearance: return "clearance";
    case EventType::kCarry: return "carry";
    case EventType::kOther: return "other";
  }
  return "other";
}

std::string_view to_string(BodyPart b) {
  switch (b) {
    case BodyPart::kFoot: return "foot";
    case BodyPart::kHead: return "head";
    case BodyPart::kOther: return "other";
  }
  return "other";
}

BodyPart body_part_from_string(std::string_view s) {
  if (s == "foot") return BodyPart::kFoot;
  if (s == "head") return BodyPart::kHead;
  if (s == "other") return BodyPart::kOther;
  throw ParseError("unknown body part '" + std::string(s) + "'");
}

ParseSummary& ParseSummary::operator+=(const ParseSummary& o) {
  rows += o.rows;
  kept += o.kept;
  dropped_off_ball += o.dropped_off_ball;
  dropped_missing_coordinates += o.dropped_missing_coordinates;
  dropped_missing_player += o.dropped_missing_player;
  unknown_types += o.unknown_types;
  return *this;
}

// ---------------------------------------------------------------- provider parsing

namespace {

constexpr double kProviderLength = 120.0;
constexpr double kProviderWidth = 80.0;

const std::unordered_set<std::string>& off_ball_types() {
  static const std::unordered_set<std::string> s{
      "Starting XI",  "Half Start",        "Half End",     "Pressure",      "Ball Receipt*",
      "Substitution", "Tactical Shift",    "Injury Stoppage", "Player On",   "Player Off",
      "Referee Ball-Drop", "Camera On",    "Camera off",   "Bad Behaviour", "Dribbled Past",
      "Shield",       "Error",             "Offside",      "50/50",         "Own Goal For",
      "Own Goal Against"};
  return s;
}

const std::unordered_set<std::string>& other_on_ball_types() {
  static const std::unordered_set<std::string> s{
      "Ball Recovery", "Block", "Dispossessed", "Foul Committed", "Foul Won",
      "Goal Keeper",   "Miscontrol", "Duel"};
  return s;
}

std::string nested_name(const json& ev, const char* obj, const char* field) {
  auto it = ev.find(obj);
  if (it == ev.end() || !it->is_object()) return {};
  auto f = it->find(field);
  if (f == it->end() || !f->is_object()) return {};
  auto n = f->find("name");
  return n != f->end() && n->is_string() ? n->get<std::string>() : std::string{};
}

std::string name_of(const json& ev, const char* field) {
  auto f = ev.find(field);
  if (f == ev.end() || !f->is_object()) return {};
  auto n = f->find("name");
  return n != f->end() && n->is_string() ? n->get<std::string>() : std::string{};
}

std::optional<Point> read_location(const json& v) {
  if (!v.is_array() || v.size() < 2 || !v[0].is_number() || !v[1].is_number()) {
    return std::nullopt;
  }
  Point p{v[0].get<double>() * kPitchLength / kProviderLength,
          v[1].get<double>() * kPitchWidth / kProviderWidth};
  p.x = std::clamp(p.x, 0.0, kPitchLength);
  p.y = std::clamp(p.y, 0.0, kPitchWidth);
  return p;
}

double period_offset_s(int period) {
  switch (period) {
    case 1: return 0.0;
    case 2: return 45.0 * 60.0;
    case 3: return 90.0 * 60.0;
    case 4: return 105.0 * 60.0;
    default: return 120.0 * 60.0;
  }
}

double parse_clock(const std::string& ts) {
  // "HH:MM:SS.mmm"
  int h = 0;
  int m = 0;
  double s = 0.0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(ts);
  if (!(in >> h >> c1 >> m >> c2 >> s) || c1 != ':' || c2 != ':') {
    throw ParseError("bad timestamp '" + ts + "'");
  }
  return h * 3600.0 + m * 60.0 + s;
}

BodyPart map_body_part(const std::string& name) {
  if (name.empty()) return BodyPart::kFoot;
  if (name == "Head") return BodyPart::kHead;
  if (name.find("Foot") != std::string::npos || name == "Drop Kick") return BodyPart::kFoot;
  return BodyPart::kOther;
}

bool success_outcome(const std::string& name) {
  return name == "Won" || name == "Success" || name == "Success In Play" ||
         name == "Success Out" || name == "Complete";
}

}  // namespace

std::vector<RawEvent> parse_events_json(std::string_view json_text, MatchId match_id,
                                        ParseSummary* summary) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid event JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("event file is not a JSON array");

  ParseSummary local;
  local.rows = doc.size();
  struct Indexed {
    RawEvent ev;
    std::size_t order;
  };
  std::vector<Indexed> kept;
  kept.reserve(doc.size());

  for (std::size_t i = 0; i < doc.size(); ++i) try {
    const json& ev = doc[i];
    const std::string type = name_of(ev, "type");
    if (off_ball_types().contains(type)) {
      ++local.dropped_off_ball;
      continue;
    }
    if (!ev.contains("player") || !ev["player"].contains("id")) {
      ++local.dropped_missing_player;
      continue;
    }
    std::optional<Point> start;
    if (auto it = ev.find("location"); it != ev.end()) start = read_location(*it);
    if (!start) {
      ++local.dropped_missing_coordinates;
      continue;
    }

    RawEvent r;
    r.event_id = ev.value("id", std::to_string(i));
    r.match_id = match_id;
    r.team_id = ev.at("team").at("id").get<TeamId>();
    r.player_id = ev.at("player").at("id").get<PlayerId>();
    r.period = ev.value("period", 1);
    r.timestamp_s = period_offset_s(r.period) + parse_clock(ev.value("timestamp", "00:00:00.000"));
    r.start = *start;
    r.end = *start;

    auto end_from = [&](const char* obj) {
      auto it = ev.find(obj);
      if (it == ev.end() || !it->is_object()) return;
      if (auto e = it->find("end_location"); e != it->end()) {
        if (auto p = read_location(*e)) r.end = *p;
      }
    };

    if (type == "Pass") {
      r.event_type = EventType::kPass;
      end_from("pass");
      const json& p = ev.at("pass");
      r.outcome = p.contains("outcome") ? Outcome::kFailure : Outcome::kSuccess;
      if (p.contains("recipient") && p["recipient"].contains("id")) {
        r.recipient_id = p["recipient"]["id"].get<PlayerId>();
      }
      const std::string ptype = nested_name(ev, "pass", "type");
      const bool cross = p.value("cross", false);
      if (ptype == "Corner") r.subtype = cross ? "corner_cross" : "corner";
      else if (ptype == "Free Kick") r.subtype = cross ? "free_kick_cross" : "free_kick";
      else if (ptype == "Throw-in") r.subtype = "throw_in";
      else if (ptype == "Goal Kick") r.subtype = "goal_kick";
      else if (cross) r.subtype = "cross";
      r.body_part = map_body_part(nested_name(ev, "pass", "body_part"));
    } else if (type == "Shot") {
      r.event_type = EventType::kShot;
      end_from("shot");
      r.outcome = nested_name(ev, "shot", "outcome") == "Goal" ? Outcome::kSuccess
                                                               : Outcome::kFailure;
      const std::string stype = nested_name(ev, "shot", "type");
      if (stype == "Penalty") r.subtype = "penalty";
      else if (stype == "Free Kick") r.subtype = "free_kick";
      r.body_part = map_body_part(nested_name(ev, "shot", "body_part"));
    } else if (type == "Dribble") {
      r.event_type = EventType::kDribble;
      r.outcome = nested_name(ev, "dribble", "outcome") == "Complete" ? Outcome::kSuccess
                                                                      : Outcome::kFailure;
    } else if (type == "Carry") {
      r.event_type = EventType::kCarry;
      end_from("carry");
    } else if (type == "Interception") {
      r.event_type = EventType::kInterception;
      r.outcome = success_outcome(nested_name(ev, "interception", "outcome"))
                      ? Outcome::kSuccess
                      : Outcome::kFailure;
    } else if (type == "Clearance") {
      r.event_type = EventType::kClearance;
      r.body_part = map_body_part(nested_name(ev, "clearance", "body_part"));
    } else if (type == "Duel" && nested_name(ev, "duel", "type") == "Tackle") {
      r.event_type = EventType::kTackle;
      r.outcome = success_outcome(nested_name(ev, "duel", "outcome")) ? Outcome::kSuccess
                                                                      : Outcome::kFailure;
    } else {
      r.event_type = EventType::kOther;
      if (type == "Foul Committed") {
        r.subtype = "foul";
        r.outcome = Outcome::kFailure;
      } else if (type == "Miscontrol" || type == "Dispossessed") {
        r.subtype = "bad_touch";
        r.outcome = Outcome::kFailure;
      } else if (type == "Goal Keeper") {
        const std::string gk = nested_name(ev, "goalkeeper", "type");
        if (gk == "Shot Saved" || gk == "Save") r.subtype = "keeper_save";
        else if (gk == "Collected") r.subtype = "keeper_claim";
        else if (gk == "Punch") r.subtype = "keeper_punch";
        else if (gk == "Keeper Sweeper" || gk == "Smother") r.subtype = "keeper_pick_up";
        end_from("goalkeeper");
      } else if (type == "Duel") {
        r.outcome = success_outcome(nested_name(ev, "duel", "outcome")) ? Outcome::kSuccess
                                                                        : Outcome::kFailure;
      } else if (!other_on_ball_types().contains(type)) {
        ++local.unknown_types;
      }
    }
    kept.push_back({std::move(r), i});
  } catch (const json::exception& e) {
    throw ParseError("event row " + std::to_string(i) + ": " + e.what());
  }

  std::stable_sort(kept.begin(), kept.end(), [](const Indexed& a, const Indexed& b) {
    if (a.ev.period != b.ev.period) return a.ev.period < b.ev.period;
    return a.ev.timestamp_s < b.ev.timestamp_s;
  });

  std::vector<RawEvent> out;
  out.reserve(kept.size());
  for (auto& k : kept) out.push_back(std::move(k.ev));
  local.kept = out.size();
  if (summary) *summary += local;
  return out;
}

std::vector<RawEvent> parse_events(const std::filesystem::path& match_file,
                                   ParseSummary* summary) {
  std::ifstream in(match_file, std::ios::binary);
  if (!in) throw ParseError("cannot open event file " + match_file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  MatchId id = 0;
  try {
    id = std::stoll(match_file.stem().string());
  } catch (const std::exception&) {
    throw ParseError("event file name must be <match_id>.json: " + match_file.string());
  }
  try {
    return parse_events_json(buf.str(), id, summary);
  } catch (const ParseError& e) {
    throw ParseError(match_file.string() + ": " + e.what());
  } catch (const json::exception& e) {
    throw ParseError(match_file.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- SPADL

namespace {
constexpr std::array<std::string_view, kActionVocabularySize> kActionNames{
    "pass",           "cross",        "throw_in",      "freekick_crossed", "freekick_short",
    "corner_crossed", "corner_short", "take_on",       "foul",             "tackle",
    "interception",   "shot",         "shot_penalty",  "shot_freekick",    "keeper_save",
    "keeper_claim",   "keeper_punch", "keeper_pick_up", "clearance",       "bad_touch",
    "dribble",        "goalkick",     "other"};

ActionType spadl_type(const RawEvent& e) {
  const std::string& s = e.subtype;
  switch (e.event_type) {
    case EventType::kPass:
      if (s == "corner") return ActionType::kCornerShort;
      if (s == "corner_cross") return ActionType::kCornerCrossed;
      if (s == "free_kick") return ActionType::kFreekickShort;
      if (s == "free_kick_cross") return ActionType::kFreekickCrossed;
      if (s == "throw_in") return ActionType::kThrowIn;
      if (s == "goal_kick") return ActionType::kGoalkick;
      if (s == "cross") return ActionType::kCross;
      return ActionType::kPass;
    case EventType::kShot:
      if (s == "penalty") return ActionType::kShotPenalty;
      if (s == "free_kick") return ActionType::kShotFreekick;
      return ActionType::kShot;
    case EventType::kDribble: return ActionType::kTakeOn;
    case EventType::kCarry: return ActionType::kDribble;
    case EventType::kTackle: return ActionType::kTackle;
    case EventType::kInterception: return ActionType::kInterception;
    case EventType::kClearance: return ActionType::kClearance;
    case EventType::kOther:
      if (s == "foul") return ActionType::kFoul;
      if (s == "bad_touch") return ActionType::kBadTouch;
      if (s == "keeper_save") return ActionType::kKeeperSave;
      if (s == "keeper_claim") return ActionType::kKeeperClaim;
      if (s == "keeper_punch") return ActionType::kKeeperPunch;
      if (s == "keeper_pick_up") return ActionType::kKeeperPickUp;
      return ActionType::kOther;
  }
  return ActionType::kOther;
}
}  // namespace

std::string_view to_string(ActionType t) { return kActionNames[static_cast<std::size_t>(t)]; }

ActionType action_type_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == s) return static_cast<ActionType>(i);
  }
  throw ParseError("unknown SPADL action type '" + std::string(s) + "'");
}

bool is_shot(ActionType t) {
  return t == ActionType::kShot || t == ActionType::kShotPenalty || t == ActionType::kShotFreekick;
}

bool is_pass_like(ActionType t) {
  switch (t) {
    case ActionType::kPass:
    case ActionType::kCross:
    case ActionType::kThrowIn:
    case ActionType::kFreekickCrossed:
    case ActionType::kFreekickShort:
    case ActionType::kCornerCrossed:
    case ActionType::kCornerShort:
    case ActionType::kGoalkick: return true;
    default: return false;
  }
}

bool is_move(ActionType t) {
  return is_pass_like(t) || t == ActionType::kDribble || t == ActionType::kTakeOn;
}

std::vector<SpadlAction> to_spadl(const std::vector<RawEvent>& events) {
  std::vector<SpadlAction> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    SpadlAction a;
    a.game_id = e.match_id;
    a.period = e.period;
    a.time_s = e.timestamp_s;
    a.team_id = e.team_id;
    a.player_id = e.player_id;
    a.action_type = spadl_type(e);
    a.body_part = e.body_part;
    a.result = e.outcome == Outcome::kSuccess ? ActionResult::kSuccess : ActionResult::kFail;
    a.start_x = e.start.x;
    a.start_y = e.start.y;
    a.end_x = e.end.x;
    a.end_y = e.end.y;
    out.push_back(a);
  }
  return out;
}

std::string to_ndjson_line(const SpadlAction& a) {
  nlohmann::ordered_json j;
  j["game_id"] = a.game_id;
  j["period"] = a.period;
  j["time_s"] = a.time_s;
  j["team_id"] = a.team_id;
  j["player_id"] = a.player_id;
  j["action_type"] = to_string(a.action_type);
  j["body_part"] = to_string(a.body_part);
  j["result"] = a.result == ActionResult::kSuccess ? "success" : "fail";
  j["start_x"] = a.start_x;
  j["start_y"] = a.start_y;
  j["end_x"] = a.end_x;
  j["end_y"] = a.end_y;
  return j.dump();
}

SpadlAction spadl_from_ndjson_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("bad action record: ") + e.what());
  }
  if (!j.is_object() || j.size() != SpadlAction::kAttributeCount) {
    throw SchemaError("action record must have exactly 12 attributes");
  }
  try {
    SpadlAction a;
    a.game_id = j.at("game_id").get<MatchId>();
    a.period = j.at("period").get<int>();
    a.time_s = j.at("time_s").get<double>();
    a.team_id = j.at("team_id").get<TeamId>();
    a.player_id = j.at("player_id").get<PlayerId>();
    a.action_type = action_type_from_string(j.at("action_type").get<std::string>());
    a.body_part = body_part_from_string(j.at("body_part").get<std::string>());
    const auto result = j.at("result").get<std::string>();
    if (result != "success" && result != "fail") throw ParseError("bad result '" + result + "'");
    a.result = result == "success" ? ActionResult::kSuccess : ActionResult::kFail;
    a.start_x = j.at("start_x").get<double>();
    a.start_y = j.at("start_y").get<double>();
    a.end_x = j.at("end_x").get<double>();
    a.end_y = j.at("end_y").get<double>();
    return a;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("action record: ") + e.what());
  }
}

void write_actions_ndjson(std::ostream& out, const std::vector<SpadlAction>& actions) {
  for (const auto& a : actions) out << to_ndjson_line(a) << '\n';
}

std::vector<SpadlAction> read_actions_ndjson(std::istream& in) {
  std::vector<SpadlAction> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(spadl_from_ndjson_line(line));
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::vector<SpadlAction>> split_by_match(const std::vector<SpadlAction>& actions) {
  std::map<MatchId, std::vector<SpadlAction>> by;
  for (const auto& a : actions) by[a.game_id].push_back(a);
  std::vector<std::vector<SpadlAction>> out;
  out.reserve(by.size());
  for (auto& [id, v] : by) out.push_back(std::move(v));
  return out;
}

std::vector<std::optional<PlayerId>> infer_recipients(const std::vector<SpadlAction>& match) {
  std::vector<std::optional<PlayerId>> out(match.size());
  for (std::size_t i = 0; i + 1 < match.size(); ++i) {
    const auto& a = match[i];
    const auto& next = match[i + 1];
    if (is_pass_like(a.action_type) && a.result == ActionResult::kSuccess &&
        next.team_id == a.team_id && next.period == a.period && next.player_id != a.player_id) {
      out[i] = next.player_id;
    }
  }
  return out;
}

}  // namespace goalnet
