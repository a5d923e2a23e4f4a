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

#ifndef RHYTHMKIT_RENDER_HPP_
#define RHYTHMKIT_RENDER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rhythmkit/matrix.hpp"

namespace rhythmkit {

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB, top row first
};

// Perceptually monotonic (viridis-style) color for a value in [0, 1].
void HeatColor(double value, std::uint8_t* r, std::uint8_t* g,
               std::uint8_t* b);

// Heatmap of a spectrogram matrix (rows = time slices, cols = frequency
// bins): time runs left to right at px_per_slice pixels per slice, the
// lowest frequency sits at the bottom at px_per_bin pixels per bin.
RgbImage RenderHeatmap(const Matrix& magnitudes, int px_per_slice = 4,
                       int px_per_bin = 2);

// PNG with pinned encoder settings (8-bit RGB, compression level 6, no
// filtering) so identical inputs give identical bytes. A non-empty
// provenance string is embedded as a tEXt chunk.
void WritePng(const std::string& path, const RgbImage& image,
              const std::string& provenance_json);

}  // namespace rhythmkit

#endif  // RHYTHMKIT_RENDER_HPP_
