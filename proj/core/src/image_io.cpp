#include "visnerf/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "visnerf/errors.hpp"

namespace visnerf {

double linear_to_srgb(double v) {
  v = std::clamp(v, 0.0, 1.0);
  if (v <= 0.0031308) return 12.92 * v;
  return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double srgb_to_linear(double s) {
  s = std::clamp(s, 0.0, 1.0);
  if (s <= 0.04045) return s / 12.92;
  return std::pow((s + 0.055) / 1.055, 2.4);
}

void write_pfm(const std::string& path, const Image& image) {
  if (image.channels != 1 && image.channels != 3)
    throw ConfigError("pfm: only 1- or 3-channel images");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("pfm: cannot open for writing: " + path);
  out << (image.channels == 1 ? "Pf" : "PF") << "\n"
      << image.width << " " << image.height << "\n"
      << "-1.0\n";
  std::vector<float> row(static_cast<size_t>(image.width) * image.channels);
  for (int y = image.height - 1; y >= 0; --y) {  // bottom-to-top
    for (int x = 0; x < image.width; ++x)
      for (int c = 0; c < image.channels; ++c)
        row[static_cast<size_t>(x) * image.channels + c] =
            static_cast<float>(image.at(x, y, c));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw ConfigError("pfm: write failed: " + path);
}

Image read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("pfm: cannot open: " + path);
  std::string magic;
  int width = 0, height = 0;
  double scale = 0;
  in >> magic >> width >> height >> scale;
  if ((magic != "Pf" && magic != "PF") || width <= 0 || height <= 0)
    throw ConfigError("pfm: bad header in " + path);
  if (scale >= 0) throw ConfigError("pfm: big-endian files unsupported: " + path);
  in.get();  // single whitespace after the scale line
  const int channels = magic == "Pf" ? 1 : 3;
  Image image(width, height, channels);
  std::vector<float> row(static_cast<size_t>(width) * channels);
  for (int y = height - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw ConfigError("pfm: truncated file: " + path);
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c)
        image.at(x, y, c) = row[static_cast<size_t>(x) * channels + c];
  }
  return image;
}

namespace {

uint8_t quantize8(double v01) {
  const double q = std::round(std::clamp(v01, 0.0, 1.0) * 255.0);
  return static_cast<uint8_t>(q);
}

void write_png_bytes(const std::string& path, const std::vector<uint8_t>& bytes,
                     int width, int height, bool rgb) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(width);
  png.height = static_cast<png_uint_32>(height);
  png.format = rgb ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, bytes.data(), 0, nullptr))
    throw ConfigError(std::string("png: write failed: ") + path + ": " + png.message);
}

std::vector<uint8_t> read_png_bytes(const std::string& path, int& width, int& height,
                                    bool rgb) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str()))
    throw ConfigError(std::string("png: cannot open: ") + path + ": " + png.message);
  png.format = rgb ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  width = static_cast<int>(png.width);
  height = static_cast<int>(png.height);
  std::vector<uint8_t> bytes(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, bytes.data(), 0, nullptr))
    throw ConfigError(std::string("png: read failed: ") + path + ": " + png.message);
  return bytes;
}

}  // namespace

void write_png_srgb(const std::string& path, const Image& rgb) {
  if (rgb.channels != 3) throw ConfigError("png: expected a 3-channel image");
  std::vector<uint8_t> bytes(rgb.pixel_count() * 3);
  for (size_t i = 0; i < rgb.pixel_count() * 3; ++i)
    bytes[i] = quantize8(linear_to_srgb(rgb.data[i]));
  write_png_bytes(path, bytes, rgb.width, rgb.height, true);
}

Image read_png_srgb(const std::string& path) {
  int width = 0, height = 0;
  const auto bytes = read_png_bytes(path, width, height, true);
  Image image = Image::rgb(width, height);
  for (size_t i = 0; i < image.data.size(); ++i)
    image.data[i] = srgb_to_linear(bytes[i] / 255.0);
  return image;
}

void write_png_gray(const std::string& path, const Image& gray) {
  if (gray.channels != 1) throw ConfigError("png: expected a 1-channel image");
  std::vector<uint8_t> bytes(gray.pixel_count());
  for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize8(gray.data[i]);
  write_png_bytes(path, bytes, gray.width, gray.height, false);
}

void write_png_mask(const std::string& path, const Mask& mask) {
  std::vector<uint8_t> bytes(mask.data.size());
  for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.data[i] ? 255 : 0;
  write_png_bytes(path, bytes, mask.width, mask.height, false);
}

Mask read_png_mask(const std::string& path) {
  int width = 0, height = 0;
  const auto bytes = read_png_bytes(path, width, height, false);
  Mask mask(width, height);
  for (size_t i = 0; i < bytes.size(); ++i) mask.data[i] = bytes[i] >= 128 ? 1 : 0;
  return mask;
}

}  // namespace visnerf
