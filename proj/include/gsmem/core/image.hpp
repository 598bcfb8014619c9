// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace gsmem {

// Plane-major image buffer: data[c * w * h + y * w + x]. Plane-major keeps
// each channel contiguous for the row kernels.
struct ImageF {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  ImageF() = default;
  ImageF(int w, int h, int c) : width(w), height(h), channels(c), data((size_t)w * h * c, 0.0) {}

  size_t pixels() const { return (size_t)width * height; }
  double* plane(int c) { return data.data() + (size_t)c * pixels(); }
  const double* plane(int c) const { return data.data() + (size_t)c * pixels(); }
  double& at(int c, int y, int x) { return data[(size_t)c * pixels() + (size_t)y * width + x]; }
  double at(int c, int y, int x) const {
    return data[(size_t)c * pixels() + (size_t)y * width + x];
  }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

// Pixel-major feature map: data[(y * w + x) * dim + f]. Per-pixel feature
// vectors stay contiguous for the accumulation kernels.
struct FeatureMap {
  int width = 0;
  int height = 0;
  int dim = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int w, int h, int d) : width(w), height(h), dim(d), data((size_t)w * h * d, 0.0) {}

  double* pixel(int y, int x) { return data.data() + ((size_t)y * width + x) * dim; }
  const double* pixel(int y, int x) const {
    return data.data() + ((size_t)y * width + x) * dim;
  }
};

// 8-bit interleaved RGB image, used only at the I/O boundary.
struct ImageU8 {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<uint8_t> data;

  ImageU8() = default;
  ImageU8(int w, int h, int c) : width(w), height(h), channels(c), data((size_t)w * h * c, 0) {}
};

}  // namespace gsmem
