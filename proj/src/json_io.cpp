#include "uigroup/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace uigroup {

std::vector<BBox> Detections::plain_boxes() const {
  std::vector<BBox> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) out.push_back(b.box);
  return out;
}

double round_sig(double v, int digits) {
  if (v == 0.0) return 0.0;
  if (!std::isfinite(v)) {
    throw std::invalid_argument("cannot serialize non-finite number");
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    // e.what() carries "parse error at line L, column C: ..." context.
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw std::runtime_error("failed to write file: " + path);
  }
}

namespace {

double require_number(const Json& j, const std::string& ctx) {
  if (!j.is_number()) {
    throw std::runtime_error(ctx + " must be a number");
  }
  return j.get<double>();
}

}  // namespace

Detections load_detections(const std::string& path) {
  const Json j = load_json_file(path);
  if (!j.is_object()) {
    throw std::runtime_error(path + ": detection file must be a JSON object");
  }
  Detections d;
  if (!j.contains("image") || !j.at("image").is_string()) {
    throw std::runtime_error(path + ": missing string field 'image'");
  }
  d.image = j.at("image").get<std::string>();
  if (!j.contains("screen") || !j.at("screen").is_object()) {
    throw std::runtime_error(path + ": missing object field 'screen'");
  }
  const Json& s = j.at("screen");
  if (!s.contains("width") || !s.contains("height") ||
      !s.at("width").is_number_integer() || !s.at("height").is_number_integer()) {
    throw std::runtime_error(path + ": screen width/height must be integers");
  }
  const auto sw = s.at("width").get<long long>();
  const auto sh = s.at("height").get<long long>();
  if (sw <= 0 || sh <= 0) {
    throw std::runtime_error(path + ": screen dimensions must be positive");
  }
  d.screen = Extent(static_cast<double>(sw), static_cast<double>(sh));
  if (!j.contains("boxes") || !j.at("boxes").is_array()) {
    throw std::runtime_error(path + ": missing array field 'boxes'");
  }
  for (const Json& e : j.at("boxes")) {
    if (!e.is_object()) {
      throw std::runtime_error(path + ": box entries must be objects");
    }
    const double x = require_number(e.at("x"), path + ": box x");
    const double y = require_number(e.at("y"), path + ": box y");
    const double w = require_number(e.at("w"), path + ": box w");
    const double h = require_number(e.at("h"), path + ": box h");
    ScoredBox sb{BBox(x, y, w, h), std::nullopt};
    if (e.contains("score")) {
      const double sc = require_number(e.at("score"), path + ": box score");
      if (sc < 0.0 || sc > 1.0) {
        throw std::runtime_error(path + ": score must lie in [0,1]");
      }
      sb.score = sc;
    }
    d.boxes.push_back(sb);
  }
  return d;
}

Json detections_to_json(const Detections& d) {
  Json j;
  j["image"] = d.image;
  j["screen"] = {{"width", static_cast<long long>(std::llround(d.screen.width))},
                 {"height", static_cast<long long>(std::llround(d.screen.height))}};
  Json boxes = Json::array();
  for (const auto& sb : d.boxes) {
    Json e;
    e["x"] = round_sig(sb.box.x);
    e["y"] = round_sig(sb.box.y);
    e["w"] = round_sig(sb.box.w);
    e["h"] = round_sig(sb.box.h);
    if (sb.score) e["score"] = round_sig(*sb.score);
    boxes.push_back(std::move(e));
  }
  j["boxes"] = std::move(boxes);
  return j;
}

void save_detections(const Detections& d, const std::string& path) {
  save_json_file(detections_to_json(d), path);
}

}  // namespace uigroup
