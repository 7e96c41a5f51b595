#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace visnerf {

/// Interleaved row-major image of doubles. Color images are linear RGB in
/// [0,1]; scalar maps (depth, opacity, visibility) use a single channel.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c),
        data(static_cast<size_t>(w) * h * c, fill) {}

  static Image rgb(int w, int h, double fill = 0.0) { return Image(w, h, 3, fill); }
  static Image gray(int w, int h, double fill = 0.0) { return Image(w, h, 1, fill); }

  double& at(int x, int y, int c = 0) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c = 0) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }

  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

/// Per-pixel boolean mask. true = selected (for visibility maps: unobserved,
/// needs inpainting).
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  Mask() = default;
  Mask(int w, int h, bool fill = false)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const { return data[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { data[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }

  size_t count_true() const {
    size_t n = 0;
    for (uint8_t v : data) n += v != 0;
    return n;
  }
  bool same_shape(const Mask& o) const { return width == o.width && height == o.height; }
};

}  // namespace visnerf
