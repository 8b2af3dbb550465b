// Copyright 2026 The DLM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dlm/svg.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dlm/error.h"

namespace dlm {

namespace {

constexpr double kCanvas = 480.0;
constexpr double kPad = 30.0;

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string RenderSvg(const std::vector<Trajectory>& trajectories,
                      const std::optional<eval::Band>& band,
                      const std::string& title) {
  if (trajectories.empty()) {
    Fail(ErrorCode::kInvalidArgument, "nothing to plot");
  }
  // Square extent covering every pose, at least 1 m.
  double extent = 1.0;
  for (const Trajectory& t : trajectories) {
    for (const Pose2& p : t.active()) {
      extent = std::max({extent, std::abs(p.x()), std::abs(p.y())});
    }
  }
  extent *= 1.1;
  const double scale = (kCanvas / 2 - kPad) / extent;
  // Robot frame: x forward drawn up, y left drawn left.
  auto sx = [&](const Pose2& p) { return kCanvas / 2 - p.y() * scale; };
  auto sy = [&](const Pose2& p) { return kCanvas / 2 - p.x() * scale; };

  std::ostringstream out;
  out.precision(6);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas
      << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << ' '
      << kCanvas << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << kCanvas / 2 << "\" y1=\"0\" x2=\"" << kCanvas / 2
      << "\" y2=\"" << kCanvas << "\" stroke=\"#ddd\"/>\n"
      << "<line x1=\"0\" y1=\"" << kCanvas / 2 << "\" x2=\"" << kCanvas
      << "\" y2=\"" << kCanvas / 2 << "\" stroke=\"#ddd\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << Escape(title) << "</text>\n";
  }
  if (band.has_value()) {
    for (size_t i = 0; i < band->mean.size(); ++i) {
      out << "<circle cx=\"" << sx(band->mean[i]) << "\" cy=\""
          << sy(band->mean[i]) << "\" r=\""
          << std::max(0.5, band->xy_std[i] * scale)
          << "\" fill=\"#9ecae1\" fill-opacity=\"0.35\"/>\n";
    }
  }
  const double arrow = 0.12 * extent * scale / 4;
  for (const Trajectory& t : trajectories) {
    out << "<polyline fill=\"none\" stroke=\"#3182bd\" stroke-width=\"1.5\" "
           "points=\"";
    for (const Pose2& p : t.active()) out << sx(p) << ',' << sy(p) << ' ';
    out << "\"/>\n";
    for (const Pose2& p : t.active()) {
      const double x2 = sx(p) - std::sin(p.theta()) * arrow;
      const double y2 = sy(p) - std::cos(p.theta()) * arrow;
      out << "<line x1=\"" << sx(p) << "\" y1=\"" << sy(p) << "\" x2=\"" << x2
          << "\" y2=\"" << y2 << "\" stroke=\"#e6550d\"/>\n";
    }
  }
  if (band.has_value()) {
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2.5\" "
           "points=\"";
    for (const Pose2& p : band->mean) out << sx(p) << ',' << sy(p) << ' ';
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace dlm
