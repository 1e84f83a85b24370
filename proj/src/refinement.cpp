#include "uigroup/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "uigroup/json_io.hpp"

namespace uigroup {

FeatureLevel::FeatureLevel(int w, int h, int c, double fill)
    : width(w), height(h), channels(c) {
  if (w <= 0 || h <= 0 || c <= 0) {
    throw std::invalid_argument("feature level dimensions must be positive");
  }
  data.assign(std::size_t(w) * h * c, fill);
}

int FeaturePyramid::channels() const {
  return levels.empty() ? 0 : levels.front().channels;
}

void FeaturePyramid::validate() const {
  if (levels.empty()) {
    throw std::invalid_argument("feature pyramid needs at least one level");
  }
  for (const auto& l : levels) {
    if (l.channels != levels.front().channels) {
      throw std::invalid_argument("all pyramid levels must share the channel dim");
    }
    if (l.data.size() != std::size_t(l.width) * l.height * l.channels) {
      throw std::invalid_argument("feature level buffer size mismatch");
    }
  }
}

namespace {

// Interpolate in grid coordinates with zero padding outside the grid.
void sample_grid(const FeatureLevel& level, double gx, double gy, double* out) {
  const int x0 = int(std::floor(gx));
  const int y0 = int(std::floor(gy));
  const double fx = gx - x0;
  const double fy = gy - y0;
  const double wts[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  std::fill(out, out + level.channels, 0.0);
  for (int i = 0; i < 4; ++i) {
    if (wts[i] == 0.0) continue;
    if (xs[i] < 0 || ys[i] < 0 || xs[i] >= level.width || ys[i] >= level.height) continue;
    const double* v = level.at(xs[i], ys[i]);
    for (int c = 0; c < level.channels; ++c) {
      out[c] += wts[i] * v[c];
    }
  }
}

// Map a normalized point onto a level's grid frame: (0,0) is the first
// node, (1,1) the last.
std::array<double, 2> to_grid(const FeatureLevel& level, std::array<double, 2> p) {
  return {p[0] * (level.width - 1), p[1] * (level.height - 1)};
}

void matvec(const std::vector<double>& m, int rows, int cols, const double* v,
            double* out) {
  for (int r = 0; r < rows; ++r) {
    double acc = 0.0;
    const double* row = m.data() + std::size_t(r) * cols;
    for (int c = 0; c < cols; ++c) {
      acc += row[c] * v[c];
    }
    out[r] = acc;
  }
}

}  // namespace

std::vector<double> bilinear_sample(const FeatureLevel& level, double px, double py) {
  if (level.width <= 0 || level.height <= 0) {
    throw std::invalid_argument("bilinear_sample: empty level");
  }
  std::vector<double> out(level.channels);
  const auto g = to_grid(level, {px, py});
  sample_grid(level, g[0], g[1], out.data());
  return out;
}

void AttentionSpec::validate() const {
  if (queries <= 0 || heads <= 0 || levels <= 0 || points <= 0 || channels <= 0 ||
      head_dim <= 0) {
    throw std::invalid_argument("attention spec dimensions must be positive");
  }
  if (int(w_out.size()) != heads || int(w_val.size()) != heads) {
    throw std::invalid_argument("attention spec needs one projection pair per head");
  }
  for (int m = 0; m < heads; ++m) {
    if (w_out[m].size() != std::size_t(channels) * head_dim) {
      throw std::invalid_argument("output projection must be channels x head_dim");
    }
    if (w_val[m].size() != std::size_t(head_dim) * channels) {
      throw std::invalid_argument("value projection must be head_dim x channels");
    }
  }
  const std::size_t n = std::size_t(queries) * heads * levels * points;
  if (offsets.size() != n || logits.size() != n) {
    throw std::invalid_argument("offsets/logits must cover queries x heads x levels x points");
  }
}

std::vector<double> attention_weights(const AttentionSpec& spec, int query, int head) {
  if (query < 0 || query >= spec.queries || head < 0 || head >= spec.heads) {
    throw std::out_of_range("attention_weights: query or head out of range");
  }
  std::vector<double> w(std::size_t(spec.levels) * spec.points);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (int l = 0; l < spec.levels; ++l) {
    for (int k = 0; k < spec.points; ++k) {
      max_logit = std::max(max_logit, spec.logits[spec.slot(query, head, l, k)]);
    }
  }
  double sum = 0.0;
  std::size_t i = 0;
  for (int l = 0; l < spec.levels; ++l) {
    for (int k = 0; k < spec.points; ++k, ++i) {
      w[i] = std::exp(spec.logits[spec.slot(query, head, l, k)] - max_logit);
      sum += w[i];
    }
  }
  for (double& v : w) {
    v /= sum;
  }
  return w;
}

std::vector<double> ms_deform_attn(int query, const AttentionSpec& spec,
                                   const FeaturePyramid& pyramid,
                                   std::array<double, 2> ref) {
  spec.validate();
  pyramid.validate();
  if (int(pyramid.levels.size()) != spec.levels) {
    throw std::invalid_argument("pyramid level count does not match attention spec");
  }
  if (pyramid.channels() != spec.channels) {
    throw std::invalid_argument("pyramid channels do not match attention spec");
  }
  if (query < 0 || query >= spec.queries) {
    throw std::out_of_range("ms_deform_attn: query index out of range");
  }

  std::vector<double> out(spec.channels, 0.0);
  std::vector<double> sample(spec.channels);
  std::vector<double> value(spec.head_dim);
  std::vector<double> head_acc(spec.head_dim);
  std::vector<double> projected(spec.channels);

  for (int m = 0; m < spec.heads; ++m) {
    const std::vector<double> w = attention_weights(spec, query, m);
    std::fill(head_acc.begin(), head_acc.end(), 0.0);
    std::size_t wi = 0;
    for (int l = 0; l < spec.levels; ++l) {
      const FeatureLevel& level = pyramid.levels[l];
      const auto base = to_grid(level, ref);
      for (int k = 0; k < spec.points; ++k, ++wi) {
        const auto& off = spec.offsets[spec.slot(query, m, l, k)];
        sample_grid(level, base[0] + off[0], base[1] + off[1], sample.data());
        matvec(spec.w_val[m], spec.head_dim, spec.channels, sample.data(), value.data());
        for (int c = 0; c < spec.head_dim; ++c) {
          head_acc[c] += w[wi] * value[c];
        }
      }
    }
    matvec(spec.w_out[m], spec.channels, spec.head_dim, head_acc.data(),
           projected.data());
    for (int c = 0; c < spec.channels; ++c) {
      out[c] += projected[c];
    }
  }
  return out;
}

namespace {

double logit(double p) {
  return std::log(p) - std::log1p(-p);
}

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void require_open_unit(double v, const char* what) {
  if (!(v > 0.0) || !(v < 1.0)) {
    throw std::domain_error(std::string(what) +
                            " must lie strictly inside (0,1): logit singularity");
  }
}

// sigmoid(delta + logit(prev)); the zero-delta case short-circuits so the
// identity holds exactly.
double decode(double delta, double prev) {
  require_open_unit(prev, "logit-space operand");
  if (delta == 0.0) {
    return prev;
  }
  return sigmoid(delta + logit(prev));
}

}  // namespace

CenterForm gen_proposal(std::array<double, 2> ref, int level,
                        const std::array<double, 4>& delta, double size_seed) {
  if (level < 1) {
    throw std::invalid_argument("proposal level index is 1-based");
  }
  if (!(size_seed > 0.0) || !(size_seed < 1.0)) {
    throw std::invalid_argument("size seed must lie in (0,1)");
  }
  require_open_unit(ref[0], "reference point x");
  require_open_unit(ref[1], "reference point y");
  const double seed = std::ldexp(size_seed, level - 1);
  require_open_unit(seed, "level-scaled size seed");
  return CenterForm{decode(delta[0], ref[0]), decode(delta[1], ref[1]),
                    decode(delta[2], seed), decode(delta[3], seed)};
}

std::vector<CenterForm> gen_proposals(const std::vector<ProposalRef>& refs,
                                      const std::vector<std::array<double, 4>>& deltas,
                                      double size_seed) {
  if (refs.size() != deltas.size()) {
    throw std::invalid_argument("gen_proposals: one delta per reference required");
  }
  std::vector<CenterForm> out;
  out.reserve(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out.push_back(gen_proposal(refs[i].point, refs[i].level, deltas[i], size_seed));
  }
  return out;
}

CenterForm refine_box(const CenterForm& prev, const std::array<double, 4>& delta) {
  return CenterForm{decode(delta[0], prev.cx), decode(delta[1], prev.cy),
                    decode(delta[2], prev.w), decode(delta[3], prev.h)};
}

RefinementState run_refinement(std::array<double, 2> ref,
                               const std::vector<std::array<double, 4>>& layer_deltas) {
  require_open_unit(ref[0], "reference point x");
  require_open_unit(ref[1], "reference point y");
  RefinementState state{ref, {}};
  CenterForm box{ref[0], ref[1], 0.1, 0.1};
  state.boxes.reserve(layer_deltas.size());
  for (const auto& d : layer_deltas) {
    box = refine_box(box, d);
    state.boxes.push_back(box);
  }
  return state;
}

void Mlp::validate() const {
  if (dims.size() < 2 || layers.size() != dims.size() - 1) {
    throw std::invalid_argument("mlp needs dims.size() == layers.size() + 1");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::size_t rows = dims[i + 1];
    const std::size_t cols = dims[i];
    if (layers[i].w.size() != rows * cols || layers[i].b.size() != rows) {
      throw std::invalid_argument("mlp layer size mismatch");
    }
  }
}

std::vector<double> Mlp::forward(const std::vector<double>& in) const {
  if (int(in.size()) != dims.front()) {
    throw std::invalid_argument("mlp input size mismatch");
  }
  std::vector<double> cur = in;
  std::vector<double> next;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const int rows = dims[i + 1];
    const int cols = dims[i];
    next.assign(rows, 0.0);
    matvec(layers[i].w, rows, cols, cur.data(), next.data());
    for (int r = 0; r < rows; ++r) {
      next[r] += layers[i].b[r];
    }
    if (i + 1 < layers.size()) {
      for (double& v : next) {
        v = std::max(0.0, v);
      }
    }
    cur.swap(next);
  }
  return cur;
}

void PriorModel::validate() const {
  if (n_bands < 1) {
    throw std::invalid_argument("prior model needs at least one band");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("prior model sigma must be positive");
  }
  if (int(matrices.size()) != n_bands) {
    throw std::invalid_argument("prior model needs one matrix per band");
  }
  for (const auto& m : matrices) {
    for (double v : m) {
      if (!(v >= 0.0) || !(v <= 1.0)) {
        throw std::invalid_argument("correlation matrix entries must lie in [0,1]");
      }
    }
  }
  mlp.validate();
  if (mlp.dims.front() != 4 || mlp.dims.back() != 4) {
    throw std::invalid_argument("prior model MLP must map 4 -> 4");
  }
}

int assign_band(double y_center, int n_bands) {
  if (n_bands < 1) {
    throw std::invalid_argument("band count must be positive");
  }
  const int band = int(std::floor(y_center * n_bands));
  return std::clamp(band, 0, n_bands - 1);
}

int assign_band(const BBox& normalized_box, int n_bands) {
  return assign_band(normalized_box.cy(), n_bands);
}

double gaussian_density(double dist, double sigma, double mu) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive");
  }
  const double z = (dist - mu) / sigma;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI * sigma * sigma);
}

double gaussian_weight(const CenterForm& box, int band, const PriorModel& model) {
  if (band < 0 || band >= model.n_bands) {
    throw std::out_of_range("band index out of range");
  }
  const double band_center = (band + 0.5) / model.n_bands;
  const double d = std::abs(box.cy - band_center);
  return gaussian_density(d, model.sigma, model.mu);
}

std::array<double, 4> pg_refine(const CenterForm& box, const PriorModel& model) {
  model.validate();
  const std::vector<double> b = {box.cx, box.cy, box.w, box.h};
  std::array<double, 4> delta = {0.0, 0.0, 0.0, 0.0};
  std::vector<double> cb(4);
  for (int j = 0; j < model.n_bands; ++j) {
    const double alpha = gaussian_weight(box, j, model);
    const auto& m = model.matrices[j];
    for (int r = 0; r < 4; ++r) {
      cb[r] = m[r * 4 + 0] * b[0] + m[r * 4 + 1] * b[1] + m[r * 4 + 2] * b[2] +
              m[r * 4 + 3] * b[3];
    }
    const std::vector<double> y = model.mlp.forward(cb);
    for (int r = 0; r < 4; ++r) {
      delta[r] += alpha * y[r];
    }
  }
  return delta;
}

namespace {

// 53-bit uniform draw in [0,1); written out so the stream is identical
// across standard libraries.
double uniform01(std::mt19937_64& eng) {
  return double(eng() >> 11) * 0x1.0p-53;
}

Mlp seeded_mlp(int hidden_dim, std::uint64_t seed) {
  Mlp mlp;
  mlp.dims = {4, hidden_dim, hidden_dim, 4};
  std::mt19937_64 eng(seed);
  for (std::size_t i = 0; i + 1 < mlp.dims.size(); ++i) {
    const int rows = mlp.dims[i + 1];
    const int cols = mlp.dims[i];
    Mlp::Layer layer;
    const double bound = 1.0 / std::sqrt(double(cols));
    layer.w.resize(std::size_t(rows) * cols);
    for (double& v : layer.w) {
      v = (2.0 * uniform01(eng) - 1.0) * bound;
    }
    layer.b.assign(rows, 0.0);
    mlp.layers.push_back(std::move(layer));
  }
  return mlp;
}

double pearson(const std::vector<double>& u, const std::vector<double>& v) {
  const std::size_t n = u.size();
  double mu = 0.0;
  double mv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= double(n);
  mv /= double(n);
  double suv = 0.0;
  double suu = 0.0;
  double svv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double du = u[i] - mu;
    const double dv = v[i] - mv;
    suv += du * dv;
    suu += du * du;
    svv += dv * dv;
  }
  if (suu <= 0.0 || svv <= 0.0) {
    // A constant feature carries no correlation signal; treat as neutral.
    return 0.0;
  }
  return std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
}

}  // namespace

PriorModel fit_prior(const std::vector<std::pair<Extent, std::vector<BBox>>>& corpus,
                     int n_bands, double sigma, double mu, int hidden_dim,
                     std::uint64_t seed) {
  if (corpus.empty()) {
    throw std::invalid_argument("fit_prior: corpus must not be empty");
  }
  if (n_bands < 1) {
    throw std::invalid_argument("fit_prior: band count must be positive");
  }
  if (hidden_dim < 1) {
    throw std::invalid_argument("fit_prior: hidden dim must be positive");
  }

  // Per band, the four feature series (cx, cy, w, h) over all member boxes.
  std::vector<std::array<std::vector<double>, 4>> bands(n_bands);
  for (const auto& [screen, boxes] : corpus) {
    for (const auto& raw : boxes) {
      const BBox b = normalize(raw, screen);
      const CenterForm c = center_form(b);
      const int j = assign_band(c.cy, n_bands);
      bands[j][0].push_back(c.cx);
      bands[j][1].push_back(c.cy);
      bands[j][2].push_back(c.w);
      bands[j][3].push_back(c.h);
    }
  }

  PriorModel model;
  model.n_bands = n_bands;
  model.sigma = sigma;
  model.mu = mu;
  model.matrices.resize(n_bands);
  for (int j = 0; j < n_bands; ++j) {
    auto& m = model.matrices[j];
    if (bands[j][0].size() < 2) {
      m.fill(0.5);
      continue;
    }
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        const double corr = r == c ? 1.0 : pearson(bands[j][r], bands[j][c]);
        m[r * 4 + c] = (corr + 1.0) / 2.0;
      }
    }
  }
  model.mlp = seeded_mlp(hidden_dim, seed);
  model.validate();
  return model;
}

PriorModel load_prior(const std::string& path) {
  const Json j = load_json_file(path);
  PriorModel model;
  try {
    model.n_bands = j.at("n_bands").get<int>();
    model.sigma = j.at("sigma").get<double>();
    model.mu = j.at("mu").get<double>();
    for (const Json& m : j.at("matrices")) {
      if (!m.is_array() || m.size() != 16) {
        throw std::runtime_error("each matrix must hold 16 row-major numbers");
      }
      std::array<double, 16> arr{};
      for (int i = 0; i < 16; ++i) {
        arr[i] = m[i].get<double>();
      }
      model.matrices.push_back(arr);
    }
    const Json& mlp = j.at("mlp");
    model.mlp.dims = mlp.at("dims").get<std::vector<int>>();
    for (const Json& layer : mlp.at("layers")) {
      Mlp::Layer l;
      l.w = layer.at("w").get<std::vector<double>>();
      l.b = layer.at("b").get<std::vector<double>>();
      model.mlp.layers.push_back(std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": malformed prior model: " + e.what());
  }
  model.validate();
  return model;
}

void save_prior(const PriorModel& model, const std::string& path) {
  model.validate();
  Json j;
  j["n_bands"] = model.n_bands;
  j["sigma"] = round_sig(model.sigma);
  j["mu"] = round_sig(model.mu);
  Json mats = Json::array();
  for (const auto& m : model.matrices) {
    Json row = Json::array();
    for (double v : m) {
      row.push_back(round_sig(v));
    }
    mats.push_back(std::move(row));
  }
  j["matrices"] = std::move(mats);
  Json mlp;
  mlp["dims"] = model.mlp.dims;
  Json layers = Json::array();
  for (const auto& l : model.mlp.layers) {
    Json layer;
    Json w = Json::array();
    for (double v : l.w) w.push_back(round_sig(v));
    Json b = Json::array();
    for (double v : l.b) b.push_back(round_sig(v));
    layer["w"] = std::move(w);
    layer["b"] = std::move(b);
    layers.push_back(std::move(layer));
  }
  mlp["layers"] = std::move(layers);
  j["mlp"] = std::move(mlp);
  save_json_file(j, path);
}

}  // namespace uigroup
