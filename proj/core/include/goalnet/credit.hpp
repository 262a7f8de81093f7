#pragma once

// Embedding-magnitude credit attribution, season ledger and rankings.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "goalnet/graphs.hpp"
#include "goalnet/ingest.hpp"
#include "goalnet/stats.hpp"
#include "goalnet/tensor.hpp"

namespace goalnet {

enum class AttributionSource { kPredicted, kLabeled };
std::string_view to_string(AttributionSource s);
AttributionSource attribution_source_from_string(std::string_view s);

// share_v = |h_v| / sum_u |h_u| * delta for every row of `embeddings`. When
// every norm is zero the shares are uniform (delta / |V|) and `*degenerate`
// is set.
std::vector<double> attribute(const Matrix& embeddings, double delta, bool* degenerate = nullptr);

struct ShareEntry {
  PlayerId player = 0;
  TeamId team = 0;
  double share = 0.0;
  bool cross_team = false;  // player is not on the acting team
};

struct EventCredit {
  EventId event_id = 0;
  MatchId match_id = 0;
  PlayerId actor = 0;
  TeamId acting_team = 0;
  double delta = 0.0;  // the value that was distributed
  std::vector<ShareEntry> shares;  // graph node order (ascending player id)
};

struct PlayerTotals {
  PlayerId player = 0;
  TeamId team = 0;
  double total = 0.0;
  std::size_t matches = 0;
};

class CreditLedger {
 public:
  // Attributes `delta` over the graph's nodes and records the result.
  void add(const EventGraph& graph, const Matrix& embeddings, double delta, PlayerId actor,
           TeamId acting_team);
  void add(EventCredit credit);

  const std::map<EventId, EventCredit>& events() const { return events_; }
  const EventCredit* find(EventId id) const;
  std::size_t degenerate_events() const { return degenerate_; }

  // Per-player season totals. A player's team is the team they appeared for
  // most often (lower team id on ties).
  std::vector<PlayerTotals> totals() const;

 private:
  std::map<EventId, EventCredit> events_;
  std::size_t degenerate_ = 0;
};

// event_id,match_id,actor_id,acting_team,delta,player_id,team_id,share,cross_team
void write_ledger_csv(std::ostream& out, const CreditLedger& ledger);
CreditLedger read_ledger_csv(std::istream& in);

enum class RankMode { kTotal, kPer90 };
enum class RankScope { kOverall, kByTeam };
RankMode rank_mode_from_string(std::string_view s);    // total | per90
RankScope rank_scope_from_string(std::string_view s);  // overall | by_team

struct RankRow {
  std::size_t rank = 0;
  PlayerId player = 0;
  TeamId team = 0;
  std::string name;
  double metric = 0.0;
  double total = 0.0;
  double minutes = 0.0;
  std::size_t matches = 0;
};

// Descending by metric, ties broken by lower player id. Per-90 uses minutes
// from `stats` when present, otherwise 90 per match appeared in. by_team
// keeps the best player of each team, ordered by team id.
std::vector<RankRow> rank(const CreditLedger& ledger, RankMode mode, RankScope scope,
                          const std::map<PlayerId, PlayerSeasonStats>& stats = {});

// rank,player_id,name,team_id,metric,total,minutes,matches
void write_ranking_csv(std::ostream& out, const std::vector<RankRow>& rows);
// Fixed-width text table: rank, player, team, metric.
std::string render_ranking_table(const std::vector<RankRow>& rows, RankMode mode);

struct CaseStep {
  SpadlAction action;
  EventId event_id = 0;
  double attributed = 0.0;  // the acting player's share of the event
  double event_delta = 0.0;
};

// Looks up each (event id, action) in the ledger. Throws Error naming the
// first event that has no ledger entry.
std::vector<CaseStep> case_report(const std::vector<std::pair<EventId, SpadlAction>>& actions,
                                  const CreditLedger& ledger);

}  // namespace goalnet
