// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#include "gsmem/io/png.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace gsmem {

namespace {

uint8_t to_byte(double v) {
  return (uint8_t)std::clamp((int)std::lround(v * 255.0), 0, 255);
}

void write_png(const std::string& path, int width, int height, int color_type,
               const std::vector<uint8_t>& rows_data, int stride) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot open for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("png writer initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw std::runtime_error("png write failed: " + path);
  }

  png_init_io(png, fp);
  png_set_IHDR(png, info, (png_uint_32)width, (png_uint_32)height, 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(rows_data.data() + (size_t)y * stride);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

void write_png_rgb(const std::string& path, const ImageF& image) {
  if (image.channels < 3 || image.width <= 0 || image.height <= 0)
    throw std::runtime_error("write_png_rgb needs a 3-plane image");
  std::vector<uint8_t> bytes((size_t)image.width * image.height * 3);
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x)
      for (int c = 0; c < 3; ++c)
        bytes[((size_t)y * image.width + x) * 3 + c] = to_byte(image.at(c, y, x));
  write_png(path, image.width, image.height, PNG_COLOR_TYPE_RGB, bytes, image.width * 3);
}

void write_png_gray(const std::string& path, const ImageF& image, double lo, double hi) {
  if (image.channels < 1 || image.width <= 0 || image.height <= 0)
    throw std::runtime_error("write_png_gray needs a non-empty image");
  const double span = hi > lo ? hi - lo : 1.0;
  std::vector<uint8_t> bytes((size_t)image.width * image.height);
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x)
      bytes[(size_t)y * image.width + x] = to_byte((image.at(0, y, x) - lo) / span);
  write_png(path, image.width, image.height, PNG_COLOR_TYPE_GRAY, bytes, image.width);
}

}  // namespace gsmem
