#include "uigroup/colormap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "uigroup/json_io.hpp"

namespace uigroup {

ColorMap::ColorMap(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) {
    throw std::invalid_argument("colormap dimensions must be positive");
  }
  pixels.assign(std::size_t(w) * h, PixelClass::Background);
}

namespace {

std::uint8_t border_mode(const ImageGray& img) {
  std::array<std::size_t, 256> counts{};
  const int w = img.width;
  const int h = img.height;
  for (int x = 0; x < w; ++x) {
    ++counts[img.at(x, 0)];
    if (h > 1) ++counts[img.at(x, h - 1)];
  }
  for (int y = 1; y + 1 < h; ++y) {
    ++counts[img.at(0, y)];
    if (w > 1) ++counts[img.at(w - 1, y)];
  }
  std::size_t best = 0;
  int mode = 0;
  for (int v = 0; v < 256; ++v) {
    if (counts[v] > best) {
      best = counts[v];
      mode = v;
    }
  }
  return static_cast<std::uint8_t>(mode);
}

struct Component {
  int min_x, min_y, max_x, max_y;
  int area;
};

}  // namespace

std::vector<BBox> detect_nontext(const ImageGray& img, const DetectParams& params) {
  if (img.width <= 0 || img.height <= 0 ||
      img.pixels.size() != std::size_t(img.width) * img.height) {
    throw std::invalid_argument("detect_nontext: empty or malformed image");
  }
  const int w = img.width;
  const int h = img.height;
  const int bg = border_mode(img);

  std::vector<std::uint8_t> fg(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    fg[i] = std::abs(int(img.pixels[i]) - bg) > params.binarize_offset ? 1 : 0;
  }

  std::vector<std::uint8_t> seen(fg.size(), 0);
  std::vector<Component> comps;
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int start = y * w + x;
      if (!fg[start] || seen[start]) continue;
      Component c{x, y, x, y, 0};
      seen[start] = 1;
      stack.assign(1, start);
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int px = p % w;
        const int py = p / w;
        ++c.area;
        c.min_x = std::min(c.min_x, px);
        c.min_y = std::min(c.min_y, py);
        c.max_x = std::max(c.max_x, px);
        c.max_y = std::max(c.max_y, py);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = px + dx;
            const int ny = py + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const int q = ny * w + nx;
            if (fg[q] && !seen[q]) {
              seen[q] = 1;
              stack.push_back(q);
            }
          }
        }
      }
      if (c.area >= params.min_area) {
        comps.push_back(c);
      }
    }
  }

  std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    if (a.min_y != b.min_y) return a.min_y < b.min_y;
    return a.min_x < b.min_x;
  });

  std::vector<BBox> boxes;
  boxes.reserve(comps.size());
  for (const auto& c : comps) {
    boxes.emplace_back(c.min_x, c.min_y, c.max_x - c.min_x + 1, c.max_y - c.min_y + 1);
  }
  return boxes;
}

namespace {

void require_within(const BBox& b, const Extent& extent, const std::string& what) {
  if (b.x < 0.0 || b.y < 0.0 || b.x2() > extent.width || b.y2() > extent.height) {
    throw std::runtime_error(what + " extends past the image extent");
  }
}

}  // namespace

std::vector<TextBox> load_text_boxes(const std::string& path, const Extent& image_extent) {
  const Json j = load_json_file(path);
  if (!j.is_object() || !j.contains("texts") || !j.at("texts").is_array()) {
    throw std::runtime_error(path + ": expected object with array field 'texts'");
  }
  std::vector<TextBox> out;
  for (const Json& e : j.at("texts")) {
    if (!e.is_object() || !e.contains("box") || !e.at("box").is_array() ||
        e.at("box").size() != 4 || !e.contains("text") || !e.at("text").is_string()) {
      throw std::runtime_error(path +
                               ": each text entry needs 'box' [x,y,w,h] and string 'text'");
    }
    const auto& b = e.at("box");
    TextBox tb{BBox(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                    b[3].get<double>()),
               e.at("text").get<std::string>()};
    require_within(tb.box, image_extent, path + ": text box");
    out.push_back(std::move(tb));
  }
  return out;
}

namespace {

void paint(ColorMap& map, const BBox& b, PixelClass label) {
  const int x0 = std::max(0, int(std::llround(b.x)));
  const int y0 = std::max(0, int(std::llround(b.y)));
  const int x1 = std::min(map.width, int(std::llround(b.x2())));
  const int y1 = std::min(map.height, int(std::llround(b.y2())));
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      map.at(x, y) = label;
    }
  }
}

}  // namespace

ColorMap render_colormap(const ElementBoxes& elements, const Extent& extent) {
  ColorMap map(int(std::llround(extent.width)), int(std::llround(extent.height)));
  for (const auto& b : elements.nontext) {
    require_within(b, extent, "non-text box");
  }
  for (const auto& t : elements.text) {
    require_within(t.box, extent, "text box");
  }
  for (const auto& b : elements.nontext) {
    paint(map, b, PixelClass::NonText);
  }
  for (const auto& t : elements.text) {
    paint(map, t.box, PixelClass::Text);
  }
  return map;
}

namespace {

constexpr std::array<std::uint8_t, 3> kBackgroundRGB = {255, 255, 255};
constexpr std::array<std::uint8_t, 3> kNonTextRGB = {255, 0, 0};
constexpr std::array<std::uint8_t, 3> kTextRGB = {0, 0, 255};

}  // namespace

ImageRGB colormap_to_rgb(const ColorMap& map) {
  ImageRGB img(map.width, map.height);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const auto& c = map.at(x, y) == PixelClass::Text
                          ? kTextRGB
                          : (map.at(x, y) == PixelClass::NonText ? kNonTextRGB
                                                                 : kBackgroundRGB);
      std::uint8_t* p = img.at(x, y);
      p[0] = c[0];
      p[1] = c[1];
      p[2] = c[2];
    }
  }
  return img;
}

void export_colormap_png(const ColorMap& map, const std::string& path) {
  write_png_rgb(colormap_to_rgb(map), path);
}

ColorMap import_colormap_png(const std::string& path) {
  const ImageRGB img = read_png_rgb(path);
  ColorMap map(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t* p = img.at(x, y);
      const std::array<std::uint8_t, 3> c = {p[0], p[1], p[2]};
      if (c == kBackgroundRGB) {
        map.at(x, y) = PixelClass::Background;
      } else if (c == kNonTextRGB) {
        map.at(x, y) = PixelClass::NonText;
      } else if (c == kTextRGB) {
        map.at(x, y) = PixelClass::Text;
      } else {
        throw std::runtime_error(path + ": pixel is not a colormap color");
      }
    }
  }
  return map;
}

}  // namespace uigroup
