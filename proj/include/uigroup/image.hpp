#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace uigroup {

/// 8-bit RGB raster, row-major, three bytes per pixel.
struct ImageRGB {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  ImageRGB() = default;
  ImageRGB(int w, int h, std::array<std::uint8_t, 3> fill = {255, 255, 255});

  std::uint8_t* at(int x, int y) { return pixels.data() + 3 * (std::size_t(y) * width + x); }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + 3 * (std::size_t(y) * width + x);
  }
  bool operator==(const ImageRGB& o) const {
    return width == o.width && height == o.height && pixels == o.pixels;
  }
};

/// 8-bit grayscale raster, row-major.
struct ImageGray {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  ImageGray() = default;
  ImageGray(int w, int h, std::uint8_t fill = 255);

  std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
};

/// Rec. 601 luma conversion with round-to-nearest.
ImageGray to_gray(const ImageRGB& img);

/// Decode a PNG file to 8-bit RGB (alpha stripped, palettes expanded).
/// Throws std::runtime_error with the path on failure.
ImageRGB read_png_rgb(const std::string& path);

/// Encode an RGB raster as an 8-bit truecolor PNG. Output bytes are
/// deterministic for identical pixel input.
void write_png_rgb(const ImageRGB& img, const std::string& path);

}  // namespace uigroup
