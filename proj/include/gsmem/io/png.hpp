// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "gsmem/core/image.hpp"

namespace gsmem {

// Writes a 3-plane [0,1] image as 8-bit RGB (values clamped). Throws
// std::runtime_error on I/O failure.
void write_png_rgb(const std::string& path, const ImageF& image);

// Writes a single plane as 8-bit grayscale, mapping [lo, hi] to [0, 255].
void write_png_gray(const std::string& path, const ImageF& image, double lo = 0.0,
                    double hi = 1.0);

}  // namespace gsmem
