#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace arabdoc {

/// Interleaved 8-bit RGB raster.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  static RasterImage filled(int width, int height, std::array<std::uint8_t, 3> rgb);

  bool valid() const {
    return width >= 1 && height >= 1 &&
           pixels.size() == static_cast<std::size_t>(width) * height * 3;
  }
  std::uint8_t* at(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* at(int x, int y) const {
    return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
  }

  bool operator==(const RasterImage&) const = default;
};

/// Any PNG colour type is accepted and converted to RGB8; alpha is composited on white.
RasterImage read_png(const std::filesystem::path& path);
void write_png(const RasterImage& image, const std::filesystem::path& path);

}  // namespace arabdoc
