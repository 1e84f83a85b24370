#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "uigroup/geometry.hpp"

namespace uigroup {

/// One level of a multi-scale feature pyramid: a height x width grid of
/// C-dimensional feature vectors, stored row-major with the channel axis
/// contiguous.
struct FeatureLevel {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  FeatureLevel() = default;
  FeatureLevel(int w, int h, int c, double fill = 0.0);

  const double* at(int x, int y) const {
    return data.data() + (std::size_t(y) * width + x) * channels;
  }
  double* at(int x, int y) {
    return data.data() + (std::size_t(y) * width + x) * channels;
  }
};

struct FeaturePyramid {
  std::vector<FeatureLevel> levels;

  int channels() const;
  void validate() const;
};

/// Bilinear interpolation of the grid at a normalized point; (0,0) maps to
/// the top-left grid node and (1,1) to the bottom-right one. Neighbors that
/// fall outside the grid contribute zero.
std::vector<double> bilinear_sample(const FeatureLevel& level, double px, double py);

/// Per-query sampling configuration of multi-scale deformable attention:
/// M heads sampling K points on each of L levels, with per-head value and
/// output projections. Offsets are expressed in feature-grid units of the
/// level they sample. Attention logits are softmax-normalized over (l, k)
/// independently per head.
struct AttentionSpec {
  int queries = 0;   // Q
  int heads = 0;     // M
  int levels = 0;    // L
  int points = 0;    // K
  int channels = 0;  // C
  int head_dim = 0;  // C_v

  /// w_out[m]: C x C_v row-major; w_val[m]: C_v x C row-major.
  std::vector<std::vector<double>> w_out;
  std::vector<std::vector<double>> w_val;
  /// Indexed [((q*M + m)*L + l)*K + k].
  std::vector<std::array<double, 2>> offsets;
  std::vector<double> logits;

  std::size_t slot(int q, int m, int l, int k) const {
    return ((std::size_t(q) * heads + m) * levels + l) * points + k;
  }
  void validate() const;
};

/// Softmax weights of one head of one query, flattened over (l, k); they
/// sum to one.
std::vector<double> attention_weights(const AttentionSpec& spec, int query, int head);

/// Evaluate multi-scale deformable attention for one query at the given
/// normalized reference point. Returns a C-dimensional feature vector.
std::vector<double> ms_deform_attn(int query, const AttentionSpec& spec,
                                   const FeaturePyramid& pyramid,
                                   std::array<double, 2> ref);

/// First-stage proposal: offsets are decoded against the reference point
/// and a level-dependent size seed s * 2^(l-1), all through the logit
/// transform. `level` is 1-based.
CenterForm gen_proposal(std::array<double, 2> ref, int level,
                        const std::array<double, 4>& delta, double size_seed = 0.05);

struct ProposalRef {
  std::array<double, 2> point;
  int level = 1;
};

std::vector<CenterForm> gen_proposals(const std::vector<ProposalRef>& refs,
                                      const std::vector<std::array<double, 4>>& deltas,
                                      double size_seed = 0.05);

/// One decoder-layer refinement step: componentwise sigmoid(delta + logit(prev)).
/// Components exactly at 0 or 1 are rejected as logit singularities.
CenterForm refine_box(const CenterForm& prev, const std::array<double, 4>& delta);

/// Reference point plus the refined box after each decoder layer.
struct RefinementState {
  std::array<double, 2> ref;
  std::vector<CenterForm> boxes;

  int depth() const { return static_cast<int>(boxes.size()); }
};

/// Run the full decoder stack: start from (ref.x, ref.y, 0.1, 0.1) and apply
/// one refinement per layer delta.
RefinementState run_refinement(std::array<double, 2> ref,
                               const std::vector<std::array<double, 4>>& layer_deltas);

/// Plain fully-connected network with ReLU hidden activations and a linear
/// output layer. Weight matrices are row-major (out x in).
struct Mlp {
  struct Layer {
    std::vector<double> w;
    std::vector<double> b;
  };
  std::vector<int> dims;
  std::vector<Layer> layers;

  void validate() const;
  std::vector<double> forward(const std::vector<double>& in) const;
};

/// Learned prior over group box statistics: one 4x4 correlation matrix per
/// horizontal screen band (entries mapped into [0,1]), a Gaussian that
/// weights bands by vertical distance, and the refinement MLP.
struct PriorModel {
  int n_bands = 0;
  double sigma = 0.3;
  double mu = 0.0;
  std::vector<std::array<double, 16>> matrices;
  Mlp mlp;

  void validate() const;
};

/// Index of the horizontal band containing the box center:
/// floor(y_center * n_bands), clamped to the last band.
int assign_band(const BBox& normalized_box, int n_bands);
int assign_band(double y_center, int n_bands);

/// Gaussian density at distance d: exp(-((d-mu)/sigma)^2 / 2) / sqrt(2 pi sigma^2).
double gaussian_density(double dist, double sigma, double mu);

/// Gaussian influence of band j on the box: density of the vertical distance
/// between the box center and the band center (j + 0.5) / N.
double gaussian_weight(const CenterForm& box, int band, const PriorModel& model);

/// Prior-distribution box delta: sum over bands of the Gaussian influence
/// times the MLP applied to (C_j * b), where b = (cx, cy, w, h). The caller
/// adds the result to its decoder-layer delta.
std::array<double, 4> pg_refine(const CenterForm& box, const PriorModel& model);

/// Fit the per-band correlation matrices from an annotated corpus. Boxes are
/// normalized per screen, assigned to bands by center y, and each band's
/// Pearson correlation matrix of (cx, cy, w, h) is mapped into [0,1] via
/// (c+1)/2. Bands with fewer than two boxes fall back to the neutral 0.5
/// matrix. MLP weights are seeded uniform placeholders meant to be replaced
/// by externally trained weights.
PriorModel fit_prior(const std::vector<std::pair<Extent, std::vector<BBox>>>& corpus,
                     int n_bands, double sigma = 0.3, double mu = 0.0,
                     int hidden_dim = 16, std::uint64_t seed = 1);

PriorModel load_prior(const std::string& path);
void save_prior(const PriorModel& model, const std::string& path);

}  // namespace uigroup
