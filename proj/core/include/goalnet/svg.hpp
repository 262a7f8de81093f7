#pragma once

// Pitch rendering of an attributed action sequence.

#include <map>
#include <string>
#include <vector>

#include "goalnet/credit.hpp"

namespace goalnet {

struct PlotOptions {
  std::string title;
  std::map<PlayerId, std::string> names;  // label fallback is the player id
};

// SVG of a 105 x 68 pitch with one arrow per step (start -> end) labelled
// "<player> <attributed delta>" with three decimals. Coordinates off the
// pitch are clamped and listed in the legend. Output depends only on the
// arguments.
std::string plot_case(const std::vector<CaseStep>& steps, const PlotOptions& options = {});

}  // namespace goalnet
