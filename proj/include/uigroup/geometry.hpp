#pragma once

#include <optional>
#include <string>

namespace uigroup {

/// Screen (or image) dimensions in pixels.
struct Extent {
  double width = 0.0;
  double height = 0.0;

  Extent() = default;
  Extent(double w, double h);
};

/// Axis-aligned bounding box in [x, y, w, h] form. The same type carries
/// pixel coordinates and normalized coordinates; `is_normalized()` tells
/// them apart. Zero-area boxes are rejected at construction.
struct BBox {
  double x;
  double y;
  double w;
  double h;

  BBox(double x, double y, double w, double h);

  double x2() const { return x + w; }
  double y2() const { return y + h; }
  double cx() const { return x + w / 2.0; }
  double cy() const { return y + h / 2.0; }
  double area() const { return w * h; }

  /// True when all four corner coordinates lie in [0, 1].
  bool is_normalized(double tol = 1e-9) const;

  bool operator==(const BBox& o) const {
    return x == o.x && y == o.y && w == o.w && h == o.h;
  }
};

/// Box as center point plus size, all four components usually normalized.
struct CenterForm {
  double cx;
  double cy;
  double w;
  double h;

  bool operator==(const CenterForm& o) const {
    return cx == o.cx && cy == o.cy && w == o.w && h == o.h;
  }
};

/// Box as top-left and bottom-right corners.
struct CornerForm {
  double x1;
  double y1;
  double x2;
  double y2;

  bool operator==(const CornerForm& o) const {
    return x1 == o.x1 && y1 == o.y1 && x2 == o.x2 && y2 == o.y2;
  }
};

enum class Axis { Horizontal, Vertical };

/// How `aligned` compares two boxes: shared edge plus matching size, or
/// shared center plus matching size.
enum class AlignMode { Edges, Centers };

const char* to_string(Axis a);

/// Intersection over union. Disjoint boxes give 0, identical boxes give 1.
double iou(const BBox& a, const BBox& b);

/// Intersection area of two boxes (0 when disjoint).
double intersection_area(const BBox& a, const BBox& b);

/// Divide all coordinates by the screen dimensions. The box must lie
/// within the screen; otherwise throws std::invalid_argument.
BBox normalize(const BBox& b, const Extent& screen);

/// Multiply normalized coordinates back into pixel space.
BBox denormalize(const BBox& b, const Extent& screen);

/// Axis along which the two boxes form a run, if any. Horizontal means
/// equal top edge and height within tol (a row); vertical means equal
/// left edge and width within tol (a column). Ties resolve horizontal.
/// AlignMode::Centers compares center coordinates instead of edges.
std::optional<Axis> aligned(const BBox& a, const BBox& b, double tol,
                            AlignMode mode = AlignMode::Edges);

/// Minimum Euclidean distance between the two rectangles' point sets;
/// 0 when they intersect or touch.
double min_dist(const BBox& a, const BBox& b);

/// Grow the deficient dimension about the box center until the aspect
/// ratio w/h falls inside [1/8, 8]. Boxes already in range are returned
/// unchanged; the result never shrinks.
BBox clamp_aspect(const BBox& b);

CenterForm center_form(const BBox& b);
CornerForm corner_form(const BBox& b);
BBox from_center_form(const CenterForm& c);
BBox from_corner_form(const CornerForm& c);

}  // namespace uigroup
