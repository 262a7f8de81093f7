#include "goalnet/xt.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "goalnet/error.hpp"
#include "json.hpp"

namespace goalnet {

std::size_t XtGrid::zone_of(Point p, std::size_t* out_of_bounds) const {
  const bool outside = p.x < 0.0 || p.x > kPitchLength || p.y < 0.0 || p.y > kPitchWidth;
  if (outside && out_of_bounds) ++*out_of_bounds;
  auto bin = [](double v, double extent, std::size_t n) {
    const double scaled = std::floor(v / (extent / static_cast<double>(n)));
    if (!(scaled >= 0.0)) return std::size_t{0};
    return std::min(static_cast<std::size_t>(scaled), n - 1);
  };
  return bin(p.y, kPitchWidth, n_y) * n_x + bin(p.x, kPitchLength, n_x);
}

XtGrid make_empty_grid(std::size_t n_x, std::size_t n_y) {
  if (n_x == 0 || n_y == 0) throw ConfigError("xT grid needs n_x, n_y >= 1");
  XtGrid g;
  g.n_x = n_x;
  g.n_y = n_y;
  const std::size_t z = g.zones();
  g.shot_prob.assign(z, 0.0);
  g.goal_prob_given_shot.assign(z, 0.0);
  g.move_prob.assign(z, 0.0);
  g.transition.assign(z * z, 0.0);
  g.value.assign(z, 0.0);
  return g;
}

std::vector<double> apply_xt_map(const XtGrid& grid, const std::vector<double>& value) {
  const std::size_t z = grid.zones();
  std::vector<double> out(z);
  for (std::size_t i = 0; i < z; ++i) {
    double move = 0.0;
    const double* row = grid.transition.data() + i * z;
    for (std::size_t j = 0; j < z; ++j) move += row[j] * value[j];
    out[i] = grid.shot_prob[i] * grid.goal_prob_given_shot[i] + grid.move_prob[i] * move;
  }
  return out;
}

double fixed_point_residual(const XtGrid& grid) {
  const auto next = apply_xt_map(grid, grid.value);
  double r = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) r = std::max(r, std::abs(next[i] - grid.value[i]));
  return r;
}

void solve_values(XtGrid& grid, double tol, std::size_t max_iterations) {
  std::vector<double> v(grid.zones(), 0.0);
  double change = 0.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    auto next = apply_xt_map(grid, v);
    change = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) change = std::max(change, std::abs(next[i] - v[i]));
    v = std::move(next);
    if (change < tol) {
      grid.value = std::move(v);
      grid.tol = tol;
      grid.iterations = it;
      grid.residual = change;
      return;
    }
  }
  throw NumericError("xT value iteration did not converge after " +
                     std::to_string(max_iterations) + " iterations (residual " +
                     std::to_string(change) + ")");
}

XtGrid fit_grid(const std::vector<SpadlAction>& actions, std::size_t n_x, std::size_t n_y,
                double tol, std::size_t max_iterations) {
  if (actions.empty()) throw Error("fit_grid: empty action corpus");
  XtGrid g = make_empty_grid(n_x, n_y);
  const std::size_t z = g.zones();
  std::vector<double> shots(z), goals(z), moves(z), successful(z);
  std::vector<double> counts(z * z);

  for (const auto& a : actions) {
    const std::size_t from = g.zone_of(a.start());
    if (is_shot(a.action_type)) {
      shots[from] += 1;
      if (a.result == ActionResult::kSuccess) goals[from] += 1;
    } else if (is_move(a.action_type)) {
      moves[from] += 1;
      if (a.result == ActionResult::kSuccess) {
        successful[from] += 1;
        counts[from * z + g.zone_of(a.end())] += 1;
      }
    }
  }

  for (std::size_t i = 0; i < z; ++i) {
    const double total = shots[i] + moves[i];
    if (total == 0.0) {
      g.shot_prob[i] = 0.0;
      g.move_prob[i] = 1.0;
      g.transition_at(i, i) = 1.0;
      g.flagged_zones.push_back(i);
      continue;
    }
    g.shot_prob[i] = shots[i] / total;
    g.move_prob[i] = 1.0 - g.shot_prob[i];
    g.goal_prob_given_shot[i] = shots[i] > 0.0 ? goals[i] / shots[i] : 0.0;
    if (successful[i] > 0.0) {
      for (std::size_t j = 0; j < z; ++j) g.transition_at(i, j) = counts[i * z + j] / successful[i];
    } else if (moves[i] > 0.0) {
      g.transition_at(i, i) = 1.0;
      g.flagged_zones.push_back(i);
    }
  }
  solve_values(g, tol, max_iterations);
  return g;
}

void write_grid_json(std::ostream& out, const XtGrid& grid) {
  nlohmann::ordered_json j;
  j["schema"] = "goalnet.xt_grid/1";
  j["n_x"] = grid.n_x;
  j["n_y"] = grid.n_y;
  j["shot_prob"] = grid.shot_prob;
  j["goal_prob_given_shot"] = grid.goal_prob_given_shot;
  j["move_prob"] = grid.move_prob;
  j["transition"] = grid.transition;
  j["value"] = grid.value;
  j["fit"] = {{"tol", grid.tol},
              {"iterations", grid.iterations},
              {"residual", grid.residual},
              {"flagged_zones", grid.flagged_zones}};
  out << j.dump(1) << '\n';
}

XtGrid read_grid_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("xT grid: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "goalnet.xt_grid/1") {
      throw SchemaError("xT grid: unsupported schema " + j.at("schema").dump());
    }
    XtGrid g = make_empty_grid(j.at("n_x").get<std::size_t>(), j.at("n_y").get<std::size_t>());
    g.shot_prob = j.at("shot_prob").get<std::vector<double>>();
    g.goal_prob_given_shot = j.at("goal_prob_given_shot").get<std::vector<double>>();
    g.move_prob = j.at("move_prob").get<std::vector<double>>();
    g.transition = j.at("transition").get<std::vector<double>>();
    g.value = j.at("value").get<std::vector<double>>();
    const auto& fit = j.at("fit");
    g.tol = fit.at("tol").get<double>();
    g.iterations = fit.at("iterations").get<std::size_t>();
    g.residual = fit.at("residual").get<double>();
    g.flagged_zones = fit.at("flagged_zones").get<std::vector<std::size_t>>();
    const std::size_t z = g.zones();
    if (g.shot_prob.size() != z || g.goal_prob_given_shot.size() != z || g.move_prob.size() != z ||
        g.value.size() != z || g.transition.size() != z * z) {
      throw SchemaError("xT grid: array sizes do not match dimensions");
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("xT grid: ") + e.what());
  }
}

double delta_xt(bool same_team, double xt_previous, double xt_current) {
  return same_team ? xt_current - xt_previous : xt_current + xt_previous;
}

XtLabel label_delta_xt(EventId event_id, const LabelEndpoint& prev, const LabelEndpoint& cur) {
  return {event_id, cur.xt, delta_xt(prev.team_id == cur.team_id, prev.xt, cur.xt)};
}

std::vector<XtLabel> label_match(const std::vector<SpadlAction>& match, const XtGrid& grid,
                                 std::size_t* out_of_bounds) {
  std::vector<XtLabel> out;
  out.reserve(match.size());
  for (std::size_t i = 0; i < match.size(); ++i) {
    const auto& a = match[i];
    const LabelEndpoint cur{a.team_id, grid.value_at(a.end(), out_of_bounds)};
    LabelEndpoint prev{a.team_id, 0.0};
    if (i > 0 && match[i - 1].period == a.period) {
      prev = {match[i - 1].team_id, out[i - 1].xt_value};
    }
    out.push_back(label_delta_xt(make_event_id(a.game_id, i), prev, cur));
  }
  return out;
}

}  // namespace goalnet
