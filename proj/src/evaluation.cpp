#include "odokit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "odokit/errors.hpp"

namespace odokit {

PositionError endpoint_error(const Trajectory& estimate, const Trajectory& truth) {
  if (estimate.empty() || truth.empty()) {
    throw ArgumentError("endpoint_error needs two nonempty trajectories");
  }
  const Pose2D& e = estimate.back().pose;
  const Pose2D& g = truth.back().pose;
  const double dx = e.x - g.x;
  const double dy = e.y - g.y;
  return {dx, dy, std::hypot(dx, dy)};
}

Pose2D pose_at(const Trajectory& traj, double t) {
  if (traj.empty()) {
    throw ArgumentError("trajectory is empty");
  }
  if (t < traj.front().t || t > traj.back().t) {
    throw ArgumentError("time " + std::to_string(t) + " s is outside the trajectory span [" +
                        std::to_string(traj.front().t) + ", " + std::to_string(traj.back().t) +
                        "] s");
  }
  auto it = std::lower_bound(traj.samples.begin(), traj.samples.end(), t,
                             [](const TimedPose& s, double v) { return s.t < v; });
  if (it->t == t) {
    return it->pose;
  }
  const TimedPose& hi = *it;
  const TimedPose& lo = *(it - 1);
  const double a = (t - lo.t) / (hi.t - lo.t);
  const double dtheta = wrap_angle(hi.pose.theta - lo.pose.theta);
  return {lo.pose.x + a * (hi.pose.x - lo.pose.x), lo.pose.y + a * (hi.pose.y - lo.pose.y),
          wrap_angle(lo.pose.theta + a * dtheta)};
}

std::vector<WaypointError> waypoint_errors(const Trajectory& estimate, const Trajectory& truth,
                                           std::span<const double> waypoint_times) {
  std::vector<WaypointError> out;
  out.reserve(waypoint_times.size());
  for (std::size_t i = 0; i < waypoint_times.size(); ++i) {
    const Pose2D e = pose_at(estimate, waypoint_times[i]);
    const Pose2D g = pose_at(truth, waypoint_times[i]);
    out.push_back({i, e.x - g.x, e.y - g.y});
  }
  return out;
}

double path_length(const Trajectory& traj) {
  double length = 0.0;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const Pose2D& a = traj.samples[i - 1].pose;
    const Pose2D& b = traj.samples[i].pose;
    length += std::hypot(b.x - a.x, b.y - a.y);
  }
  return length;
}

ErrorReport make_report(const Trajectory& estimate, const Trajectory& truth,
                        std::span<const double> waypoint_times) {
  const PositionError end = endpoint_error(estimate, truth);
  return {end.dx, end.dy, end.norm, waypoint_errors(estimate, truth, waypoint_times),
          path_length(truth)};
}

std::string report_to_json(const ErrorReport& report) {
  nlohmann::ordered_json j;
  j["endpoint_error_x"] = report.endpoint_error_x;
  j["endpoint_error_y"] = report.endpoint_error_y;
  j["endpoint_error_norm"] = report.endpoint_error_norm;
  j["per_waypoint_errors"] = nlohmann::ordered_json::array();
  for (const auto& w : report.per_waypoint_errors) {
    j["per_waypoint_errors"].push_back({{"index", w.index}, {"dx", w.dx}, {"dy", w.dy}});
  }
  j["path_length"] = report.path_length;
  return j.dump(2) + "\n";
}

std::vector<Pose2D> simplify_polyline(const Trajectory& traj) {
  constexpr double kTolerance = 1e-9;
  std::vector<Pose2D> pts;
  for (const auto& s : traj.samples) {
    if (pts.empty() || std::hypot(s.pose.x - pts.back().x, s.pose.y - pts.back().y) > kTolerance) {
      pts.push_back(s.pose);
    }
  }
  if (pts.size() < 3) {
    return pts;
  }
  std::vector<Pose2D> out{pts.front()};
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Pose2D& a = out.back();
    const Pose2D& b = pts[i];
    const Pose2D& c = pts[i + 1];
    const double ux = c.x - a.x;
    const double uy = c.y - a.y;
    const double len = std::hypot(ux, uy);
    const double offset = len > 0.0 ? std::abs(ux * (b.y - a.y) - uy * (b.x - a.x)) / len : 0.0;
    const bool forward = (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y) > 0.0;
    if (offset > kTolerance || !forward) {
      out.push_back(b);
    }
  }
  out.push_back(pts.back());
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

double tick_step(double span) {
  for (double base = 1e-3;; base *= 10.0) {
    for (double m : {1.0, 2.0, 5.0}) {
      if (span / (base * m) <= 12.0) return base * m;
    }
  }
}

struct Frame {
  double min_x, min_y, max_x, max_y, scale;
  static constexpr double kMargin = 60.0;
  static constexpr double kPlot = 600.0;

  double px(double x) const { return kMargin + (x - min_x) * scale; }
  double py(double y) const { return kMargin + (max_y - y) * scale; }
  double width() const { return 2 * kMargin + (max_x - min_x) * scale; }
  double height() const { return 2 * kMargin + (max_y - min_y) * scale; }
};

Frame make_frame(const std::vector<Pose2D>& a, const std::vector<Pose2D>& b) {
  Frame f{a.front().x, a.front().y, a.front().x, a.front().y, 1.0};
  for (const auto* pts : {&a, &b}) {
    for (const auto& p : *pts) {
      f.min_x = std::min(f.min_x, p.x);
      f.max_x = std::max(f.max_x, p.x);
      f.min_y = std::min(f.min_y, p.y);
      f.max_y = std::max(f.max_y, p.y);
    }
  }
  const double span = std::max({f.max_x - f.min_x, f.max_y - f.min_y, 1.0});
  const double pad = 0.05 * span;
  f.min_x -= pad;
  f.min_y -= pad;
  f.max_x += pad;
  f.max_y += pad;
  f.scale = Frame::kPlot / std::max(f.max_x - f.min_x, f.max_y - f.min_y);
  return f;
}

void polyline(std::string& svg, const Frame& f, const std::vector<Pose2D>& pts,
              const std::string& id, const std::string& style) {
  svg += "<polyline id=\"" + id + "\" fill=\"none\" " + style + " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) svg += ' ';
    svg += fmt(f.px(pts[i].x)) + "," + fmt(f.py(pts[i].y));
  }
  svg += "\"/>\n";
}

void markers(std::string& svg, const Frame& f, const std::vector<Pose2D>& pts,
             const std::string& id, const std::string& color) {
  const Pose2D& s = pts.front();
  const Pose2D& e = pts.back();
  svg += "<circle id=\"" + id + "-start\" cx=\"" + fmt(f.px(s.x)) + "\" cy=\"" + fmt(f.py(s.y)) +
         "\" r=\"5\" fill=\"" + color + "\"/>\n";
  svg += "<rect id=\"" + id + "-end\" x=\"" + fmt(f.px(e.x) - 5) + "\" y=\"" +
         fmt(f.py(e.y) - 5) + "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
}

}  // namespace

std::string render_paths_svg(const Trajectory& estimate, const Trajectory& truth) {
  if (estimate.empty() || truth.empty()) {
    throw ArgumentError("render_paths needs two nonempty trajectories");
  }
  const std::vector<Pose2D> est = simplify_polyline(estimate);
  const std::vector<Pose2D> gt = simplify_polyline(truth);
  const Frame f = make_frame(gt, est);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(f.width()) + "\" height=\"" +
         fmt(f.height()) + "\" viewBox=\"0 0 " + fmt(f.width()) + " " + fmt(f.height()) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes along the bottom and left edges of the plot area.
  const double x0 = f.px(f.min_x);
  const double x1 = f.px(f.max_x);
  const double y0 = f.py(f.min_y);
  const double y1 = f.py(f.max_y);
  svg += "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" font-family=\"sans-serif\" "
         "font-size=\"11\">\n";
  svg += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" +
         fmt(y0) + "\"/>\n";
  svg += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" +
         fmt(y1) + "\"/>\n";
  const double step = tick_step(std::max(f.max_x - f.min_x, f.max_y - f.min_y));
  for (auto i = static_cast<long>(std::ceil(f.min_x / step)); i * step <= f.max_x; ++i) {
    const double v = static_cast<double>(i) * step;
    const double x = f.px(v);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
           fmt(y0 + 5) + "\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y0 + 18) +
           "\" text-anchor=\"middle\" stroke=\"none\">" + fmt(v) + "</text>\n";
  }
  for (auto i = static_cast<long>(std::ceil(f.min_y / step)); i * step <= f.max_y; ++i) {
    const double v = static_cast<double>(i) * step;
    const double y = f.py(v);
    svg += "<line x1=\"" + fmt(x0 - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x0) + "\" y2=\"" +
           fmt(y) + "\"/>\n";
    svg += "<text x=\"" + fmt(x0 - 8) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\" stroke=\"none\">" + fmt(v) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(0.5 * (x0 + x1)) + "\" y=\"" + fmt(y0 + 40) +
         "\" text-anchor=\"middle\" stroke=\"none\">x [m]</text>\n";
  svg += "<text x=\"" + fmt(x0 - 45) + "\" y=\"" + fmt(0.5 * (y0 + y1)) +
         "\" text-anchor=\"middle\" stroke=\"none\">y [m]</text>\n";
  svg += "</g>\n";

  polyline(svg, f, gt, "truth", "stroke=\"#1f77b4\" stroke-width=\"2\"");
  polyline(svg, f, est, "estimate",
           "stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"8,4\"");
  markers(svg, f, gt, "truth", "#1f77b4");
  markers(svg, f, est, "estimate", "#d62728");
  svg += "</svg>\n";
  return svg;
}

void render_paths(const Trajectory& estimate, const Trajectory& truth,
                  const std::filesystem::path& output) {
  const std::string svg = render_paths_svg(estimate, truth);
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + output.string() + " for writing");
  }
  out << svg;
  if (!out) {
    throw IoError("failed writing " + output.string());
  }
}

}  // namespace odokit
