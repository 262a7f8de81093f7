#pragma once

// Event-stream ingestion: open-data match files -> RawEvent -> SPADL actions.
//
// All coordinates are meters on a 105 x 68 pitch with the acting team
// attacking towards x = 105 (the provider's convention, rescaled).

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace goalnet {

using MatchId = std::int64_t;
using TeamId = std::int64_t;
using PlayerId = std::int64_t;
using EventId = std::int64_t;

// Events are addressed by (match, position in the match's action stream).
inline constexpr std::int64_t kMaxActionsPerMatch = 100000;
inline EventId make_event_id(MatchId match, std::size_t index) {
  return match * kMaxActionsPerMatch + static_cast<std::int64_t>(index);
}

inline constexpr double kPitchLength = 105.0;
inline constexpr double kPitchWidth = 68.0;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

enum class EventType { kPass, kShot, kDribble, kTackle, kInterception, kClearance, kCarry, kOther };
enum class Outcome { kSuccess, kFailure };
enum class BodyPart { kFoot, kHead, kOther };

std::string_view to_string(EventType t);
std::string_view to_string(BodyPart b);
BodyPart body_part_from_string(std::string_view s);

struct RawEvent {
  std::string event_id;
  MatchId match_id = 0;
  TeamId team_id = 0;
  PlayerId player_id = 0;
  EventType event_type = EventType::kOther;
  Outcome outcome = Outcome::kSuccess;
  Point start;
  Point end;  // == start when the action has no displacement
  double timestamp_s = 0.0;  // seconds since kick-off of the match
  int period = 1;
  std::optional<PlayerId> recipient_id;  // pass-like events only
  // Provider refinement used to pick the SPADL type: "corner", "free_kick",
  // "throw_in", "goal_kick", "cross", "corner_cross", "free_kick_cross",
  // "penalty", "foul", "bad_touch", "keeper_save", ... or empty.
  std::string subtype;
  BodyPart body_part = BodyPart::kFoot;
};

struct ParseSummary {
  std::size_t rows = 0;  // provider rows in the file
  std::size_t kept = 0;
  std::size_t dropped_off_ball = 0;
  std::size_t dropped_missing_coordinates = 0;
  std::size_t dropped_missing_player = 0;
  std::size_t unknown_types = 0;  // kept, mapped to `other`

  std::size_t dropped() const {
    return dropped_off_ball + dropped_missing_coordinates + dropped_missing_player;
  }
  ParseSummary& operator+=(const ParseSummary& o);
};

// Parses one open-data event file (a JSON array of events). The match id is
// taken from the file stem. Events come back sorted by (period, timestamp).
std::vector<RawEvent> parse_events(const std::filesystem::path& match_file,
                                   ParseSummary* summary = nullptr);
std::vector<RawEvent> parse_events_json(std::string_view json_text, MatchId match_id,
                                        ParseSummary* summary = nullptr);

// ---------------------------------------------------------------- SPADL

// The 22 published SPADL action types, then `other` for anything unmapped.
enum class ActionType : std::uint8_t {
  kPass,
  kCross,
  kThrowIn,
  kFreekickCrossed,
  kFreekickShort,
  kCornerCrossed,
  kCornerShort,
  kTakeOn,
  kFoul,
  kTackle,
  kInterception,
  kShot,
  kShotPenalty,
  kShotFreekick,
  kKeeperSave,
  kKeeperClaim,
  kKeeperPunch,
  kKeeperPickUp,
  kClearance,
  kBadTouch,
  kDribble,
  kGoalkick,
  kOther,
};
inline constexpr std::size_t kActionVocabularySize = 23;

std::string_view to_string(ActionType t);
ActionType action_type_from_string(std::string_view s);  // throws ParseError

bool is_shot(ActionType t);
bool is_pass_like(ActionType t);
bool is_move(ActionType t);  // pass-like, dribble or take-on

enum class ActionResult : std::uint8_t { kFail = 0, kSuccess = 1 };

struct SpadlAction {
  static constexpr std::size_t kAttributeCount = 12;

  MatchId game_id = 0;
  int period = 1;
  double time_s = 0.0;
  TeamId team_id = 0;
  PlayerId player_id = 0;
  ActionType action_type = ActionType::kOther;
  BodyPart body_part = BodyPart::kFoot;
  ActionResult result = ActionResult::kSuccess;
  double start_x = 0.0;
  double start_y = 0.0;
  double end_x = 0.0;
  double end_y = 0.0;

  Point start() const { return {start_x, start_y}; }
  Point end() const { return {end_x, end_y}; }
  friend bool operator==(const SpadlAction&, const SpadlAction&) = default;
};

std::vector<SpadlAction> to_spadl(const std::vector<RawEvent>& events);

// Newline-delimited JSON, one action per line with exactly the 12 named
// fields in declaration order.
std::string to_ndjson_line(const SpadlAction& a);
SpadlAction spadl_from_ndjson_line(std::string_view line);
void write_actions_ndjson(std::ostream& out, const std::vector<SpadlAction>& actions);
std::vector<SpadlAction> read_actions_ndjson(std::istream& in);

// Splits a multi-match action stream into per-match streams, ordered by
// match id; order within a match is preserved.
std::vector<std::vector<SpadlAction>> split_by_match(const std::vector<SpadlAction>& actions);

// SPADL carries no receiver column. A successful pass-like action's recipient
// is the next action's player when that action is by the same team, in the
// same period, by a different player.
std::vector<std::optional<PlayerId>> infer_recipients(const std::vector<SpadlAction>& match);

}  // namespace goalnet
