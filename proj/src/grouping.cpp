#include "uigroup/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace uigroup {

namespace {

constexpr int kUnvisited = -2;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::vector<int> neighbors_of(const std::vector<std::vector<double>>& pts, int i,
                              double eps_sq) {
  std::vector<int> out;
  for (int j = 0; j < int(pts.size()); ++j) {
    if (sq_dist(pts[i], pts[j]) <= eps_sq) {
      out.push_back(j);
    }
  }
  return out;
}

}  // namespace

ClusterResult dbscan(const std::vector<std::vector<double>>& points, double eps,
                     int min_pts) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("dbscan: eps must be positive");
  }
  if (min_pts < 1) {
    throw std::invalid_argument("dbscan: min_pts must be at least 1");
  }
  const int n = int(points.size());
  for (const auto& p : points) {
    if (points.size() > 1 && p.size() != points.front().size()) {
      throw std::invalid_argument("dbscan: points must share one dimension");
    }
  }

  const double eps_sq = eps * eps;
  ClusterResult res;
  res.labels.assign(n, kUnvisited);
  int next_label = 0;

  for (int i = 0; i < n; ++i) {
    if (res.labels[i] != kUnvisited) continue;
    std::vector<int> seeds = neighbors_of(points, i, eps_sq);
    if (int(seeds.size()) < min_pts) {
      res.labels[i] = kNoise;
      continue;
    }
    const int label = next_label++;
    res.labels[i] = label;
    std::deque<int> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      const int j = queue.front();
      queue.pop_front();
      if (res.labels[j] == kNoise) {
        res.labels[j] = label;  // border point
      }
      if (res.labels[j] != kUnvisited) continue;
      res.labels[j] = label;
      const std::vector<int> jn = neighbors_of(points, j, eps_sq);
      if (int(jn.size()) >= min_pts) {
        queue.insert(queue.end(), jn.begin(), jn.end());
      }
    }
  }

  res.clusters.resize(next_label);
  for (int c = 0; c < next_label; ++c) {
    res.clusters[c].label = c;
  }
  for (int i = 0; i < n; ++i) {
    if (res.labels[i] >= 0) {
      res.clusters[res.labels[i]].members.push_back(i);
    }
  }
  return res;
}

void GroupingConfig::validate() const {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("grouping: eps must be positive");
  }
  if (min_pts < 1) {
    throw std::invalid_argument("grouping: min_pts must be at least 1");
  }
  if (connectivity < 0.0 || align_tol < 0.0) {
    throw std::invalid_argument("grouping: thresholds must be non-negative");
  }
}

std::vector<PerceptualGroup> perceptual_groups(const std::vector<BBox>& boxes,
                                               const GroupingConfig& cfg) {
  cfg.validate();
  for (const auto& b : boxes) {
    if (!b.is_normalized()) {
      throw std::invalid_argument("perceptual_groups: boxes must be normalized");
    }
  }

  std::vector<std::vector<double>> sizes;
  sizes.reserve(boxes.size());
  for (const auto& b : boxes) {
    sizes.push_back({b.w, b.h});
  }
  const ClusterResult clusters = dbscan(sizes, cfg.eps, cfg.min_pts);

  std::vector<PerceptualGroup> groups;
  for (const Cluster& cluster : clusters.clusters) {
    std::vector<int> remaining = cluster.members;  // ascending
    while (!remaining.empty()) {
      std::vector<int> output = {remaining.front()};
      remaining.erase(remaining.begin());
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto it = remaining.begin(); it != remaining.end();) {
          bool connected = false;
          for (int o : output) {
            if (aligned(boxes[*it], boxes[o], cfg.align_tol, cfg.align_mode) &&
                min_dist(boxes[*it], boxes[o]) < cfg.connectivity) {
              connected = true;
              break;
            }
          }
          if (connected) {
            output.push_back(*it);
            it = remaining.erase(it);
            changed = true;
          } else {
            ++it;
          }
        }
      }
      if (output.size() >= 2) {
        std::sort(output.begin(), output.end());
        CornerForm c = corner_form(boxes[output.front()]);
        for (int i : output) {
          c.x1 = std::min(c.x1, boxes[i].x);
          c.y1 = std::min(c.y1, boxes[i].y);
          c.x2 = std::max(c.x2, boxes[i].x2());
          c.y2 = std::max(c.y2, boxes[i].y2());
        }
        groups.push_back(PerceptualGroup{c, std::move(output)});
      }
    }
  }
  return groups;
}

}  // namespace uigroup
