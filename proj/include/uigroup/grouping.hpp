#pragma once

#include <string>
#include <vector>

#include "uigroup/geometry.hpp"

namespace uigroup {

/// Label used for points not reachable from any core point.
inline constexpr int kNoise = -1;

struct Cluster {
  int label = 0;
  std::vector<int> members;  // ascending input indices
};

struct ClusterResult {
  /// Per input point: cluster id, or kNoise.
  std::vector<int> labels;
  /// Non-noise clusters, ids assigned in order of first core point by
  /// input index.
  std::vector<Cluster> clusters;
};

/// Density-based clustering with Euclidean distance. A point is core when
/// at least min_pts points (itself included) lie within eps; clusters are
/// the density-connected components.
ClusterResult dbscan(const std::vector<std::vector<double>>& points, double eps,
                     int min_pts);

struct GroupingConfig {
  double eps = 0.0116;
  int min_pts = 2;
  /// Connectivity threshold T on the minimum box distance.
  double connectivity = 0.12;
  double align_tol = 0.01;
  AlignMode align_mode = AlignMode::Edges;

  void validate() const;
};

/// A section-level group: the covering corner quadruple plus the indices
/// of the member boxes, all in normalized coordinates.
struct PerceptualGroup {
  CornerForm corners;
  std::vector<int> members;
};

/// Infer section-level groups from normalized component boxes: cluster by
/// the (w, h) size feature with DBSCAN, then within each cluster grow
/// output lists by moving in any remaining box that is aligned with some
/// member and closer than the connectivity threshold, until fixpoint.
/// Lists with at least two members emit their covering quadruple.
std::vector<PerceptualGroup> perceptual_groups(const std::vector<BBox>& boxes,
                                               const GroupingConfig& cfg = {});

}  // namespace uigroup
