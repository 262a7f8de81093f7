#pragma once

// Expected-threat surface over a zoned pitch.
//
// Per zone z: shot_prob(z) + move_prob(z) = 1, goal_prob(z) = P(goal | shot),
// transition(z -> z') = destination distribution of successful moves from z.
// The value surface is the fixed point of
//   value(z) = shot_prob(z) * goal_prob(z)
//            + move_prob(z) * sum_z' transition(z -> z') * value(z'),
// iterated from zero.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "goalnet/ingest.hpp"

namespace goalnet {

struct XtGrid {
  std::size_t n_x = 16;
  std::size_t n_y = 12;
  std::vector<double> shot_prob;
  std::vector<double> goal_prob_given_shot;
  std::vector<double> move_prob;
  std::vector<double> transition;  // zones x zones, row-major, row = origin
  std::vector<double> value;
  std::vector<std::size_t> flagged_zones;  // no usable observations

  // Fit metadata.
  double tol = 1e-8;
  std::size_t iterations = 0;
  double residual = 0.0;

  std::size_t zones() const { return n_x * n_y; }
  double& transition_at(std::size_t from, std::size_t to) { return transition[from * zones() + to]; }
  double transition_at(std::size_t from, std::size_t to) const {
    return transition[from * zones() + to];
  }

  // Zone index iy * n_x + ix. Bins are half-open, so a point on a boundary
  // belongs to the zone with the larger index; the far touchlines stay in the
  // last bin. Points off the pitch are clamped, and *out_of_bounds (if given)
  // is incremented.
  std::size_t zone_of(Point p, std::size_t* out_of_bounds = nullptr) const;
  double value_at(Point p, std::size_t* out_of_bounds = nullptr) const {
    return value[zone_of(p, out_of_bounds)];
  }
};

// Allocates an n_x x n_y grid with zeroed probabilities and values.
XtGrid make_empty_grid(std::size_t n_x, std::size_t n_y);

// One application of the fixed-point map.
std::vector<double> apply_xt_map(const XtGrid& grid, const std::vector<double>& value);

// Iterates the map from zero until the max per-zone change drops below tol.
// Throws NumericError (with the residual) after max_iterations.
void solve_values(XtGrid& grid, double tol = 1e-8, std::size_t max_iterations = 1000);

// Max |map(value) - value| of the grid's current value surface.
double fixed_point_residual(const XtGrid& grid);

// Estimates shot/goal/move probabilities and the move transition matrix from
// a corpus of actions (counted by start zone), then solves for value.
XtGrid fit_grid(const std::vector<SpadlAction>& actions, std::size_t n_x = 16,
                std::size_t n_y = 12, double tol = 1e-8, std::size_t max_iterations = 1000);

void write_grid_json(std::ostream& out, const XtGrid& grid);
XtGrid read_grid_json(std::istream& in);

// ---------------------------------------------------------------- labels

struct XtLabel {
  EventId event_id = 0;
  double xt_value = 0.0;  // xT of the event's end location
  double delta_xt = 0.0;
};

// Same team: current - previous. Different teams: current + previous.
double delta_xt(bool same_team, double xt_previous, double xt_current);

struct LabelEndpoint {
  TeamId team_id = 0;
  double xt = 0.0;
};
XtLabel label_delta_xt(EventId event_id, const LabelEndpoint& prev, const LabelEndpoint& cur);

// Labels every action of one match in stream order. The first action of each
// period takes xT_prev = 0 on the same-team branch.
std::vector<XtLabel> label_match(const std::vector<SpadlAction>& match, const XtGrid& grid,
                                 std::size_t* out_of_bounds = nullptr);

}  // namespace goalnet
