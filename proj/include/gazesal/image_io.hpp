/* Copyright 2026 The gazesal Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "gazesal/common.hpp"

namespace gazesal {

struct Gray8Image {
  ImageSize size;
  std::vector<std::uint8_t> pixels;  // row-major
};

/// Reads binary PGM (P5, maxval <= 255) or 8-bit grayscale PNG, chosen by
/// file signature. Throws InputError on anything else.
Gray8Image read_gray8(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const Gray8Image& image);
void write_png_gray(const std::filesystem::path& path, const Gray8Image& image);

/// Writes an RGB PNG by mapping each gray level through a 256-entry table.
void write_png_colormap(const std::filesystem::path& path, const Gray8Image& image,
                        const std::array<std::array<std::uint8_t, 3>, 256>& lut);

/// Fixed black-red-yellow-white heat table: r = 3v, g = 3v - 1, b = 3v - 2,
/// each clamped to [0, 1] with v = level / 255, scaled to 0..255 and rounded.
const std::array<std::array<std::uint8_t, 3>, 256>& heat_colormap();

}  // namespace gazesal
