#include "arabdoc/image.hpp"

#include "arabdoc/error.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

namespace arabdoc {

RasterImage RasterImage::filled(int width, int height, std::array<std::uint8_t, 3> rgb) {
  if (width < 1 || height < 1) throw Error(ErrorCode::OutOfRange, "image dimensions must be >= 1");
  RasterImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
    img.pixels[i] = rgb[0];
    img.pixels[i + 1] = rgb[1];
    img.pixels[i + 2] = rgb[2];
  }
  return img;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return f;
}

}  // namespace

RasterImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  auto file = open(path, "rb");
  if (!png_image_begin_read_from_stdio(&image, file.get())) {
    throw Error(ErrorCode::IoError, path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  RasterImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&image, &white, out.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::IoError, path.string() + ": " + msg);
  }
  return out;
}

void write_png(const RasterImage& img, const std::filesystem::path& path) {
  if (!img.valid()) throw Error(ErrorCode::OutOfRange, "invalid image");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  auto file = open(path, "wb");
  if (!png_image_write_to_stdio(&image, file.get(), 0, img.pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoError, path.string() + ": " + image.message);
  }
}

}  // namespace arabdoc
