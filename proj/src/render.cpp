// Copyright 2026 The Rhythmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rhythmkit/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include <png.h>

#include "rhythmkit/error.hpp"

namespace rhythmkit {

namespace {

struct Anchor {
  double t;
  double r, g, b;
};

// Five viridis anchor colors, interpolated linearly.
constexpr Anchor kAnchors[] = {
    {0.00, 68.0, 1.0, 84.0},    {0.25, 59.0, 82.0, 139.0},
    {0.50, 33.0, 145.0, 140.0}, {0.75, 94.0, 201.0, 98.0},
    {1.00, 253.0, 231.0, 37.0},
};

}  // namespace

void HeatColor(double value, std::uint8_t* r, std::uint8_t* g,
               std::uint8_t* b) {
  const double v = std::clamp(value, 0.0, 1.0);
  const Anchor* lo = &kAnchors[0];
  const Anchor* hi = &kAnchors[0];
  for (const Anchor& a : kAnchors) {
    if (a.t <= v) lo = &a;
  }
  for (auto it = std::rbegin(kAnchors); it != std::rend(kAnchors); ++it) {
    if (it->t >= v) hi = &*it;
  }
  const double span = hi->t - lo->t;
  const double w = span > 0.0 ? (v - lo->t) / span : 0.0;
  *r = static_cast<std::uint8_t>(std::lround(lo->r + w * (hi->r - lo->r)));
  *g = static_cast<std::uint8_t>(std::lround(lo->g + w * (hi->g - lo->g)));
  *b = static_cast<std::uint8_t>(std::lround(lo->b + w * (hi->b - lo->b)));
}

RgbImage RenderHeatmap(const Matrix& magnitudes, int px_per_slice,
                       int px_per_bin) {
  Require(magnitudes.rows() > 0 && magnitudes.cols() > 0,
          ErrorCode::kInvalidArgument, "empty spectrogram");
  Require(px_per_slice >= 1 && px_per_bin >= 1, ErrorCode::kInvalidArgument,
          "pixel scale must be >= 1");
  const std::size_t n_slices = magnitudes.rows();
  const std::size_t n_bins = magnitudes.cols();
  RgbImage image;
  image.width = n_slices * static_cast<std::size_t>(px_per_slice);
  image.height = n_bins * static_cast<std::size_t>(px_per_bin);
  image.pixels.resize(image.width * image.height * 3);
  for (std::size_t y = 0; y < image.height; ++y) {
    // Top pixel row shows the highest frequency bin.
    const std::size_t bin =
        n_bins - 1 - y / static_cast<std::size_t>(px_per_bin);
    for (std::size_t x = 0; x < image.width; ++x) {
      const std::size_t slice = x / static_cast<std::size_t>(px_per_slice);
      std::uint8_t* px = &image.pixels[(y * image.width + x) * 3];
      HeatColor(magnitudes.at(slice, bin), px, px + 1, px + 2);
    }
  }
  return image;
}

void WritePng(const std::string& path, const RgbImage& image,
              const std::string& provenance_json) {
  Require(image.width > 0 && image.height > 0 &&
              image.pixels.size() == image.width * image.height * 3,
          ErrorCode::kInvalidArgument, "malformed image buffer");

  std::FILE* fp = std::fopen(path.c_str(), "wb");
  Require(fp != nullptr, ErrorCode::kIoError,
          "cannot open for writing: " + path);

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) {
    std::fclose(fp);
    Raise(ErrorCode::kIoError, "png writer allocation failed");
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    std::fclose(fp);
    Raise(ErrorCode::kIoError, "png info allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    Raise(ErrorCode::kIoError, "png encoding failed: " + path);
  }

  png_init_io(png, fp);
  // Pinned encoder settings keep the bytes reproducible.
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (!provenance_json.empty()) {
    png_text text;
    std::memset(&text, 0, sizeof(text));
    text.compression = PNG_TEXT_COMPRESSION_NONE;
    text.key = const_cast<char*>("provenance");
    text.text = const_cast<char*>(provenance_json.c_str());
    text.text_length = provenance_json.size();
    png_set_text(png, info, &text, 1);
  }
  png_write_info(png, info);
  for (std::size_t y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(
                           &image.pixels[y * image.width * 3]));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  Require(std::fclose(fp) == 0, ErrorCode::kIoError, "write failed: " + path);
}

}  // namespace rhythmkit
