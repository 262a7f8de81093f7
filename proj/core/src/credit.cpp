#include "goalnet/credit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <cmath>
#include <ostream>
#include <sstream>

#include "goalnet/error.hpp"
#include "goalnet/format.hpp"

namespace goalnet {

std::string_view to_string(AttributionSource s) {
  return s == AttributionSource::kPredicted ? "predicted" : "labeled";
}

AttributionSource attribution_source_from_string(std::string_view s) {
  if (s == "predicted") return AttributionSource::kPredicted;
  if (s == "labeled") return AttributionSource::kLabeled;
  throw ConfigError("unknown attribution source '" + std::string(s) +
                    "' (expected predicted or labeled)");
}

std::vector<double> attribute(const Matrix& embeddings, double delta, bool* degenerate) {
  const std::size_t n = embeddings.rows();
  std::vector<double> norms(n, 0.0);
  double sum = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double sq = 0.0;
    for (double x : embeddings.row(v)) sq += x * x;
    norms[v] = std::sqrt(sq);
    sum += norms[v];
  }
  if (degenerate) *degenerate = false;
  std::vector<double> shares(n, 0.0);
  if (n == 0) return shares;
  if (sum == 0.0) {
    if (degenerate) *degenerate = true;
    std::fill(shares.begin(), shares.end(), delta / static_cast<double>(n));
    return shares;
  }
  for (std::size_t v = 0; v < n; ++v) shares[v] = norms[v] / sum * delta;
  return shares;
}

void CreditLedger::add(const EventGraph& graph, const Matrix& embeddings, double delta,
                       PlayerId actor, TeamId acting_team) {
  if (embeddings.rows() != graph.num_nodes()) {
    throw ShapeError("ledger: embeddings have " + std::to_string(embeddings.rows()) +
                     " rows for a graph of " + std::to_string(graph.num_nodes()) + " nodes");
  }
  bool degenerate = false;
  const auto shares = attribute(embeddings, delta, &degenerate);
  if (degenerate) ++degenerate_;
  EventCredit c{graph.event_id, graph.match_id, actor, acting_team, delta, {}};
  for (std::size_t v = 0; v < shares.size(); ++v) {
    c.shares.push_back({graph.node_ids[v], graph.node_teams[v], shares[v],
                        graph.node_teams[v] != acting_team});
  }
  add(std::move(c));
}

void CreditLedger::add(EventCredit credit) {
  const EventId id = credit.event_id;
  if (!events_.emplace(id, std::move(credit)).second) {
    throw Error("ledger: event " + std::to_string(id) + " attributed twice");
  }
}

const EventCredit* CreditLedger::find(EventId id) const {
  auto it = events_.find(id);
  return it == events_.end() ? nullptr : &it->second;
}

std::vector<PlayerTotals> CreditLedger::totals() const {
  struct Acc {
    double total = 0.0;
    std::map<TeamId, std::size_t> team_counts;
    std::vector<MatchId> matches;
  };
  std::map<PlayerId, Acc> acc;
  for (const auto& [id, ev] : events_) {
    for (const auto& s : ev.shares) {
      auto& a = acc[s.player];
      a.total += s.share;
      ++a.team_counts[s.team];
      if (a.matches.empty() || a.matches.back() != ev.match_id) a.matches.push_back(ev.match_id);
    }
  }
  std::vector<PlayerTotals> out;
  for (auto& [player, a] : acc) {
    std::sort(a.matches.begin(), a.matches.end());
    const auto distinct =
        static_cast<std::size_t>(std::unique(a.matches.begin(), a.matches.end()) - a.matches.begin());
    TeamId team = 0;
    std::size_t best = 0;
    for (const auto& [t, n] : a.team_counts) {
      if (n > best) {
        best = n;
        team = t;
      }
    }
    out.push_back({player, team, a.total, distinct});
  }
  return out;
}

void write_ledger_csv(std::ostream& out, const CreditLedger& ledger) {
  out << "event_id,match_id,actor_id,acting_team,delta,player_id,team_id,share,cross_team\n";
  for (const auto& [id, ev] : ledger.events()) {
    for (const auto& s : ev.shares) {
      out << id << ',' << ev.match_id << ',' << ev.actor << ',' << ev.acting_team << ','
          << fmt_real(ev.delta) << ',' << s.player << ',' << s.team << ',' << fmt_real(s.share)
          << ',' << (s.cross_team ? 1 : 0) << '\n';
    }
  }
}

namespace {
template <typename T>
T parse_field(std::string_view s, std::size_t line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("ledger line " + std::to_string(line) + ": bad value '" + std::string(s) + "'");
  }
  return v;
}
}  // namespace

CreditLedger read_ledger_csv(std::istream& in) {
  CreditLedger ledger;
  std::map<EventId, EventCredit> events;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (n == 1 || line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != 9) throw ParseError("ledger line " + std::to_string(n) + ": expected 9 fields");
    const auto id = parse_field<EventId>(f[0], n);
    auto& ev = events[id];
    ev.event_id = id;
    ev.match_id = parse_field<MatchId>(f[1], n);
    ev.actor = parse_field<PlayerId>(f[2], n);
    ev.acting_team = parse_field<TeamId>(f[3], n);
    ev.delta = parse_field<double>(f[4], n);
    ev.shares.push_back({parse_field<PlayerId>(f[5], n), parse_field<TeamId>(f[6], n),
                         parse_field<double>(f[7], n), parse_field<int>(f[8], n) != 0});
  }
  for (auto& [id, ev] : events) ledger.add(std::move(ev));
  return ledger;
}

RankMode rank_mode_from_string(std::string_view s) {
  if (s == "total") return RankMode::kTotal;
  if (s == "per90") return RankMode::kPer90;
  throw ConfigError("unknown rank mode '" + std::string(s) + "' (expected total or per90)");
}

RankScope rank_scope_from_string(std::string_view s) {
  if (s == "overall") return RankScope::kOverall;
  if (s == "by_team") return RankScope::kByTeam;
  throw ConfigError("unknown rank scope '" + std::string(s) + "' (expected overall or by_team)");
}

std::vector<RankRow> rank(const CreditLedger& ledger, RankMode mode, RankScope scope,
                          const std::map<PlayerId, PlayerSeasonStats>& stats) {
  std::vector<RankRow> rows;
  for (const auto& t : ledger.totals()) {
    RankRow r;
    r.player = t.player;
    r.team = t.team;
    r.total = t.total;
    r.matches = t.matches;
    r.minutes = 90.0 * static_cast<double>(t.matches);
    if (auto it = stats.find(t.player); it != stats.end()) {
      if (it->second.minutes_played > 0.0) r.minutes = it->second.minutes_played;
      r.name = it->second.name;
    }
    r.metric = mode == RankMode::kTotal ? r.total
               : r.minutes > 0.0    ? r.total / r.minutes * 90.0
                                    : 0.0;
    rows.push_back(std::move(r));
  }
  auto by_metric = [](const RankRow& a, const RankRow& b) {
    if (a.metric != b.metric) return a.metric > b.metric;
    return a.player < b.player;
  };
  std::sort(rows.begin(), rows.end(), by_metric);

  if (scope == RankScope::kByTeam) {
    std::map<TeamId, RankRow> best;
    for (const auto& r : rows) best.emplace(r.team, r);  // first seen is best
    rows.clear();
    for (auto& [team, r] : best) rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
  return rows;
}

void write_ranking_csv(std::ostream& out, const std::vector<RankRow>& rows) {
  out << "rank,player_id,name,team_id,metric,total,minutes,matches\n";
  for (const auto& r : rows) {
    std::string name = r.name;
    if (name.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : name) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      name = q + "\"";
    }
    out << r.rank << ',' << r.player << ',' << name << ',' << r.team << ',' << fmt_real(r.metric)
        << ',' << fmt_real(r.total) << ',' << fmt_real(r.minutes) << ',' << r.matches << '\n';
  }
}

std::string render_ranking_table(const std::vector<RankRow>& rows, RankMode mode) {
  std::vector<std::array<std::string, 4>> cells;
  cells.push_back({"Rank", "Player", "Team", mode == RankMode::kTotal ? "xT total" : "xT per 90"});
  for (const auto& r : rows) {
    std::string player = r.name.empty() ? std::to_string(r.player)
                                        : r.name + " (" + std::to_string(r.player) + ")";
    cells.push_back({std::to_string(r.rank), player, std::to_string(r.team), fmt_fixed(r.metric, 4)});
  }
  std::array<std::size_t, 4> width{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      const auto& s = cells[i][c];
      const std::string pad(width[c] - s.size(), ' ');
      // numbers right-aligned, names left-aligned
      if (c == 1) out << s << pad;
      else out << pad << s;
      out << (c == 3 ? "\n" : "  ");
    }
    if (i == 0) {
      std::size_t total = width[0] + width[1] + width[2] + width[3] + 6;
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

std::vector<CaseStep> case_report(const std::vector<std::pair<EventId, SpadlAction>>& actions,
                                  const CreditLedger& ledger) {
  std::vector<CaseStep> out;
  for (const auto& [id, action] : actions) {
    const EventCredit* ev = ledger.find(id);
    if (!ev) throw Error("case_report: event " + std::to_string(id) + " is not in the ledger");
    CaseStep step{action, id, 0.0, ev->delta};
    bool found = false;
    for (const auto& s : ev->shares) {
      if (s.player == action.player_id) {
        step.attributed = s.share;
        found = true;
      }
    }
    if (!found) {
      throw Error("case_report: player " + std::to_string(action.player_id) +
                  " has no share in event " + std::to_string(id));
    }
    out.push_back(step);
  }
  return out;
}

}  // namespace goalnet
