#include "goalnet/svg.hpp"

#include <algorithm>
#include <sstream>

#include "goalnet/format.hpp"

namespace goalnet {

namespace {

constexpr double kMargin = 4.0;

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return fmt_fixed(v, 2); }

// Pitch y grows upwards; SVG y grows downwards.
double sx(double x) { return x; }
double sy(double y) { return kPitchWidth - y; }

bool clamp_point(double& x, double& y) {
  const double cx = std::clamp(x, 0.0, kPitchLength);
  const double cy = std::clamp(y, 0.0, kPitchWidth);
  const bool clamped = cx != x || cy != y;
  x = cx;
  y = cy;
  return clamped;
}

void pitch_markings(std::ostringstream& o) {
  const double L = kPitchLength, W = kPitchWidth;
  o << "<g fill=\"none\" stroke=\"#ffffff\" stroke-width=\"0.3\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << num(L) << "\" height=\"" << num(W) << "\"/>\n";
  o << "<line x1=\"" << num(L / 2) << "\" y1=\"0\" x2=\"" << num(L / 2) << "\" y2=\"" << num(W)
    << "\"/>\n";
  o << "<circle cx=\"" << num(L / 2) << "\" cy=\"" << num(W / 2) << "\" r=\"9.15\"/>\n";
  // penalty and goal areas
  for (double side : {0.0, 1.0}) {
    const double box_x = side == 0.0 ? 0.0 : L - 16.5;
    const double six_x = side == 0.0 ? 0.0 : L - 5.5;
    o << "<rect x=\"" << num(box_x) << "\" y=\"" << num(W / 2 - 20.16) << "\" width=\"16.50\" height=\"40.32\"/>\n";
    o << "<rect x=\"" << num(six_x) << "\" y=\"" << num(W / 2 - 9.16) << "\" width=\"5.50\" height=\"18.32\"/>\n";
  }
  o << "</g>\n";
}

}  // namespace

std::string plot_case(const std::vector<CaseStep>& steps, const PlotOptions& options) {
  const double legend_h = 9.0 + 3.0 * static_cast<double>(steps.size());
  const double view_w = kPitchLength + 2 * kMargin;
  const double view_h = kPitchWidth + 2 * kMargin + legend_h;

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(-kMargin) << ' '
    << num(-kMargin) << ' ' << num(view_w) << ' ' << num(view_h) << "\" width=\""
    << num(view_w * 8) << "\" height=\"" << num(view_h * 8) << "\" font-family=\"sans-serif\">\n";
  if (!options.title.empty()) o << "<title>" << xml_escape(options.title) << "</title>\n";
  o << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"4\" "
       "markerHeight=\"4\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" "
       "fill=\"#111111\"/></marker></defs>\n";
  o << "<rect x=\"" << num(-kMargin) << "\" y=\"" << num(-kMargin) << "\" width=\"" << num(view_w)
    << "\" height=\"" << num(kPitchWidth + 2 * kMargin) << "\" fill=\"#3a7d44\"/>\n";
  pitch_markings(o);

  std::vector<std::size_t> clamped;
  o << "<g class=\"actions\">\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& a = steps[i].action;
    double x0 = a.start_x, y0 = a.start_y, x1 = a.end_x, y1 = a.end_y;
    const bool c0 = clamp_point(x0, y0);
    const bool c1 = clamp_point(x1, y1);
    if (c0 || c1) clamped.push_back(i);
    const double v = steps[i].attributed;
    const char* colour = v > 0 ? "#ffd400" : v < 0 ? "#d7263d" : "#dddddd";
    o << "<line x1=\"" << num(sx(x0)) << "\" y1=\"" << num(sy(y0)) << "\" x2=\"" << num(sx(x1))
      << "\" y2=\"" << num(sy(y1)) << "\" stroke=\"" << colour
      << "\" stroke-width=\"0.6\" marker-end=\"url(#arrow)\"/>\n";
    auto it = options.names.find(a.player_id);
    const std::string who = it != options.names.end() ? it->second : std::to_string(a.player_id);
    std::string label = std::to_string(i + 1) + ". " + who + " " + (v >= 0 ? "+" : "") +
                        fmt_fixed(v, 3);
    if (c0 || c1) label += " *";
    o << "<text x=\"" << num(sx(x0)) << "\" y=\"" << num(sy(y0) - 1.2)
      << "\" font-size=\"2.2\" fill=\"#ffffff\">" << xml_escape(label) << "</text>\n";
  }
  o << "</g>\n";

  double y = kPitchWidth + kMargin + 3.0;
  o << "<g class=\"legend\" font-size=\"2.2\" fill=\"#111111\">\n";
  o << "<text x=\"0\" y=\"" << num(y) << "\">" << steps.size()
    << " actions; label = player and attributed xT change</text>\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    y += 3.0;
    const auto& s = steps[i];
    o << "<text x=\"0\" y=\"" << num(y) << "\">" << (i + 1) << ". "
      << xml_escape(std::string(to_string(s.action.action_type))) << " by " << s.action.player_id
      << ": " << fmt_fixed(s.attributed, 3) << " of event " << fmt_fixed(s.event_delta, 3)
      << "</text>\n";
  }
  if (!clamped.empty()) {
    y += 3.0;
    o << "<text x=\"0\" y=\"" << num(y) << "\">* coordinates clamped to the pitch for action";
    for (std::size_t i : clamped) o << ' ' << (i + 1);
    o << "</text>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace goalnet
