#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uigroup/geometry.hpp"

namespace uigroup {

using Json = nlohmann::ordered_json;

/// A detection or annotation box, optionally carrying a confidence score.
struct ScoredBox {
  BBox box;
  std::optional<double> score;
};

/// Contents of a detection/annotation file: the screenshot it refers to,
/// the screen size used for normalization, and the boxes themselves.
struct Detections {
  std::string image;
  Extent screen{1, 1};
  std::vector<ScoredBox> boxes;

  std::vector<BBox> plain_boxes() const;
};

/// Round to the given number of significant decimal digits. All floating
/// point values we serialize pass through this so artifacts are stable.
double round_sig(double v, int digits = 9);

/// Parse a JSON file; parse failures are rethrown with the path and the
/// line/column context supplied by the parser.
Json load_json_file(const std::string& path);

/// Serialize with 2-space indentation and a trailing newline.
void save_json_file(const Json& j, const std::string& path);

Detections load_detections(const std::string& path);
Json detections_to_json(const Detections& d);
void save_detections(const Detections& d, const std::string& path);

}  // namespace uigroup
