#include <string>

#include "doctest.h"
#include "goalnet/svg.hpp"

using namespace goalnet;

namespace {

CaseStep step(PlayerId who, double x0, double y0, double x1, double y1, double share) {
  CaseStep s;
  s.action.player_id = who;
  s.action.start_x = x0;
  s.action.start_y = y0;
  s.action.end_x = x1;
  s.action.end_y = y1;
  s.attributed = share;
  s.event_delta = 2 * share;
  return s;
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("one arrow and one label per step") {
  PlotOptions o;
  o.names[7] = "Ann <A&B>";
  const auto svg = plot_case({step(7, 10, 10, 30, 20, 0.1234), step(8, 30, 20, 50, 40, -0.05)}, o);
  CHECK(count(svg, "marker-end=\"url(#arrow)\"") == 2);
  CHECK(svg.find("1. Ann &lt;A&amp;B&gt; +0.123") != std::string::npos);
  CHECK(svg.find("2. 8 -0.050") != std::string::npos);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find('*') == std::string::npos);
}

TEST_CASE("pitch y is flipped") {
  const auto svg = plot_case({step(1, 0, 0, 105, 68, 0.0)});
  CHECK(svg.find("x1=\"0.00\" y1=\"68.00\" x2=\"105.00\" y2=\"0.00\"") != std::string::npos);
}

TEST_CASE("off-pitch coordinates are clamped and flagged") {
  const auto svg = plot_case({step(1, 10, 10, 20, 20, 0.01), step(2, -5, 10, 120, 80, 0.02)});
  CHECK(svg.find("2. 2 +0.020 *") != std::string::npos);
  CHECK(svg.find("clamped to the pitch for action 2") != std::string::npos);
  CHECK(svg.find("x1=\"0.00\" y1=\"58.00\" x2=\"105.00\" y2=\"0.00\"") != std::string::npos);
}

TEST_CASE("output depends only on the arguments") {
  const std::vector<CaseStep> steps = {step(3, 1.5, 2.5, 60, 30, 0.333333), step(4, 60, 30, 90, 34, -0.0)};
  PlotOptions o;
  o.title = "case";
  CHECK(plot_case(steps, o) == plot_case(steps, o));
  CHECK(plot_case(steps, o).find("-0.000") == std::string::npos);
}
