#include "uigroup/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uigroup {

Extent::Extent(double w, double h) : width(w), height(h) {
  if (!(w > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("Extent dimensions must be strictly positive");
  }
}

BBox::BBox(double x_, double y_, double w_, double h_)
    : x(x_), y(y_), w(w_), h(h_) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) ||
      !std::isfinite(h)) {
    throw std::invalid_argument("BBox coordinates must be finite");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("BBox width and height must be strictly positive");
  }
}

bool BBox::is_normalized(double tol) const {
  return x >= -tol && y >= -tol && x2() <= 1.0 + tol && y2() <= 1.0 + tol;
}

const char* to_string(Axis a) {
  return a == Axis::Horizontal ? "horizontal" : "vertical";
}

double intersection_area(const BBox& a, const BBox& b) {
  const double ix = std::min(a.x2(), b.x2()) - std::max(a.x, b.x);
  const double iy = std::min(a.y2(), b.y2()) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) {
    return 0.0;
  }
  return ix * iy;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) {
    return 0.0;
  }
  const double uni = a.area() + b.area() - inter;
  return inter / uni;
}

BBox normalize(const BBox& b, const Extent& screen) {
  if (!(screen.width > 0.0) || !(screen.height > 0.0)) {
    throw std::invalid_argument("screen extent must be positive");
  }
  if (b.x < 0.0 || b.y < 0.0 || b.x2() > screen.width || b.y2() > screen.height) {
    throw std::invalid_argument("box exceeds screen bounds");
  }
  return BBox(b.x / screen.width, b.y / screen.height, b.w / screen.width,
              b.h / screen.height);
}

BBox denormalize(const BBox& b, const Extent& screen) {
  return BBox(b.x * screen.width, b.y * screen.height, b.w * screen.width,
              b.h * screen.height);
}

std::optional<Axis> aligned(const BBox& a, const BBox& b, double tol,
                            AlignMode mode) {
  if (tol < 0.0) {
    throw std::invalid_argument("alignment tolerance must be non-negative");
  }
  const double dy = mode == AlignMode::Edges ? std::abs(a.y - b.y)
                                             : std::abs(a.cy() - b.cy());
  const double dx = mode == AlignMode::Edges ? std::abs(a.x - b.x)
                                             : std::abs(a.cx() - b.cx());
  if (dy <= tol && std::abs(a.h - b.h) <= tol) {
    return Axis::Horizontal;
  }
  if (dx <= tol && std::abs(a.w - b.w) <= tol) {
    return Axis::Vertical;
  }
  return std::nullopt;
}

double min_dist(const BBox& a, const BBox& b) {
  const double gx = std::max({0.0, b.x - a.x2(), a.x - b.x2()});
  const double gy = std::max({0.0, b.y - a.y2(), a.y - b.y2()});
  return std::hypot(gx, gy);
}

BBox clamp_aspect(const BBox& b) {
  constexpr double kMaxRatio = 8.0;
  const double ratio = b.w / b.h;
  if (ratio > kMaxRatio) {
    const double nh = b.w / kMaxRatio;
    return BBox(b.x, b.y - (nh - b.h) / 2.0, b.w, nh);
  }
  if (ratio < 1.0 / kMaxRatio) {
    const double nw = b.h / kMaxRatio;
    return BBox(b.x - (nw - b.w) / 2.0, b.y, nw, b.h);
  }
  return b;
}

CenterForm center_form(const BBox& b) { return {b.cx(), b.cy(), b.w, b.h}; }

CornerForm corner_form(const BBox& b) { return {b.x, b.y, b.x2(), b.y2()}; }

BBox from_center_form(const CenterForm& c) {
  return BBox(c.cx - c.w / 2.0, c.cy - c.h / 2.0, c.w, c.h);
}

BBox from_corner_form(const CornerForm& c) {
  return BBox(c.x1, c.y1, c.x2 - c.x1, c.y2 - c.y1);
}

}  // namespace uigroup
