#include "pvmerge/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>

#include "pvmerge/error.hpp"

namespace pvmerge {

PiecewiseLinear::PiecewiseLinear(std::vector<Breakpoint> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidArgument("piecewise linear: need at least two breakpoints");
  if (points_.front().x != 0.0 || points_.back().x != 1.0) {
    throw InvalidArgument("piecewise linear: breakpoints must span [0,1]");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].y) || !std::isfinite(points_[i].x)) {
      throw InvalidArgument("piecewise linear: non-finite breakpoint");
    }
    if (i > 0 && !(points_[i - 1].x < points_[i].x)) {
      throw InvalidArgument("piecewise linear: breakpoints must be strictly increasing");
    }
  }
}

PiecewiseLinear PiecewiseLinear::constant(double value) {
  return PiecewiseLinear({{0.0, value}, {1.0, value}});
}

double PiecewiseLinear::operator()(double x) const {
  if (x <= 0.0) return points_.front().y;
  if (x >= 1.0) return points_.back().y;
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const Breakpoint& p, double v) { return p.x < v; });
  if (it->x == x) return it->y;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (x - lo.x) / (hi.x - lo.x);
  return lo.y + w * (hi.y - lo.y);
}

double PiecewiseLinear::integral() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    total += 0.5 * (points_[i].x - points_[i - 1].x) * (points_[i].y + points_[i - 1].y);
  }
  return total;
}

PiecewiseLinear PiecewiseLinear::scaled(double factor) const {
  auto pts = points_;
  for (auto& p : pts) p.y *= factor;
  return PiecewiseLinear(std::move(pts));
}

PiecewiseLinear PiecewiseLinear::positive_part() const {
  std::vector<Breakpoint> out;
  out.reserve(points_.size() * 2);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i > 0) {
      const auto& a = points_[i - 1];
      const auto& b = points_[i];
      if ((a.y < 0.0 && b.y > 0.0) || (a.y > 0.0 && b.y < 0.0)) {
        const double x = a.x + (b.x - a.x) * (a.y / (a.y - b.y));
        if (x > out.back().x && x < b.x) out.push_back({x, 0.0});
      }
    }
    out.push_back({points_[i].x, std::max(points_[i].y, 0.0)});
  }
  return PiecewiseLinear(std::move(out));
}

PiecewiseLinear PiecewiseLinear::decreasing_envelope() const {
  auto pts = points_;
  for (std::size_t i = pts.size() - 1; i-- > 0;) pts[i].y = std::max(pts[i].y, pts[i + 1].y);
  return PiecewiseLinear(std::move(pts));
}

bool PiecewiseLinear::is_decreasing() const {
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].y > points_[i - 1].y) return false;
  }
  return true;
}

PiecewiseLinear PiecewiseLinear::average(std::span<const PiecewiseLinear> fs) {
  if (fs.empty()) throw InvalidArgument("piecewise linear: average of nothing");
  if (std::all_of(fs.begin(), fs.end(), [&](const PiecewiseLinear& f) { return f == fs[0]; })) {
    return fs[0];
  }
  std::vector<double> xs;
  for (const auto& f : fs) {
    for (const auto& p : f.points_) xs.push_back(p.x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Breakpoint> out;
  out.reserve(xs.size());
  const double count = static_cast<double>(fs.size());
  for (double x : xs) {
    double sum = 0.0;
    for (const auto& f : fs) sum += f(x);
    out.push_back({x, sum / count});
  }
  return PiecewiseLinear(std::move(out));
}

}  // namespace pvmerge
