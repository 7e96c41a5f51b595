#pragma once

#include <string>

#include "visnerf/image.hpp"

namespace visnerf {

/// Piecewise sRGB transfer (IEC 61966-2-1). Inputs are clamped to [0,1].
double linear_to_srgb(double v);
double srgb_to_linear(double s);

/// PFM: "Pf" (1 channel) or "PF" (3 channels), little-endian (scale line
/// "-1.0"), float32 rows stored bottom-to-top. Round-trips bit-exactly.
void write_pfm(const std::string& path, const Image& image);
Image read_pfm(const std::string& path);

/// 8-bit RGB PNG. The linear<->sRGB transfer is applied exactly once in
/// each direction; quantization is round-to-nearest.
void write_png_srgb(const std::string& path, const Image& rgb);
Image read_png_srgb(const std::string& path);

/// 8-bit grayscale PNG holding raw [0,1] values (no transfer). Used for
/// previews of scalar maps.
void write_png_gray(const std::string& path, const Image& gray);

/// 8-bit grayscale mask PNG: 255 = true, 0 = false. Reading treats any
/// value >= 128 as true.
void write_png_mask(const std::string& path, const Mask& mask);
Mask read_png_mask(const std::string& path);

}  // namespace visnerf
