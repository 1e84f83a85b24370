#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uigroup/geometry.hpp"
#include "uigroup/image.hpp"

namespace uigroup {

/// Per-pixel label of the element colormap.
enum class PixelClass : std::uint8_t { Background = 0, NonText = 1, Text = 2 };

/// An OCR text box with its recognized string.
struct TextBox {
  BBox box;
  std::string text;
};

enum class BoxSource { Builtin, ExternalFile };

/// The text / non-text element partition of one screenshot.
struct ElementBoxes {
  std::vector<BBox> nontext;
  std::vector<TextBox> text;
  BoxSource source = BoxSource::Builtin;
};

/// Tri-state raster marking element positions: background, non-text
/// element, text element.
struct ColorMap {
  int width = 0;
  int height = 0;
  std::vector<PixelClass> pixels;

  ColorMap() = default;
  ColorMap(int w, int h);

  PixelClass& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
  PixelClass at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
  Extent extent() const { return Extent(width, height); }
  bool operator==(const ColorMap& o) const {
    return width == o.width && height == o.height && pixels == o.pixels;
  }
};

struct DetectParams {
  /// Binarization threshold as absolute offset from the background shade.
  int binarize_offset = 25;
  /// Components with fewer foreground pixels than this are dropped.
  int min_area = 16;
};

/// Unsupervised non-text element detection: estimate the background shade
/// from the border ring, binarize, flood-fill 8-connected components, and
/// return each component's bounding box ordered by (y, x).
std::vector<BBox> detect_nontext(const ImageGray& img, const DetectParams& params = {});

/// Load OCR results from a JSON file {"texts":[{"box":[x,y,w,h],"text":s}]}
/// and validate every box against the image extent.
std::vector<TextBox> load_text_boxes(const std::string& path, const Extent& image_extent);

/// Paint non-text boxes first, then text boxes over them, so pixels under
/// both carry the Text label.
ColorMap render_colormap(const ElementBoxes& elements, const Extent& extent);

/// Write the colormap as a PNG: Background=#FFFFFF, NonText=#FF0000,
/// Text=#0000FF, one pixel per raster cell.
void export_colormap_png(const ColorMap& map, const std::string& path);

/// Inverse of export_colormap_png; rejects pixels outside the three colors.
ColorMap import_colormap_png(const std::string& path);

ImageRGB colormap_to_rgb(const ColorMap& map);

}  // namespace uigroup
