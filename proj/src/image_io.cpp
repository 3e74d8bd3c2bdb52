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

#include "gazesal/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gazesal {

namespace {

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Skips whitespace and '#' comments, then reads one unsigned integer.
bool pgm_token(const std::string& data, std::size_t& pos, int& value) {
  while (pos < data.size()) {
    const char c = data[pos];
    if (c == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= data.size() || !std::isdigit(static_cast<unsigned char>(data[pos]))) return false;
  long v = 0;
  while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) {
    v = v * 10 + (data[pos] - '0');
    if (v > 1'000'000) return false;
    ++pos;
  }
  value = static_cast<int>(v);
  return true;
}

Gray8Image decode_pgm(const std::string& data, const std::filesystem::path& path) {
  std::size_t pos = 2;
  int w = 0, h = 0, maxval = 0;
  if (!pgm_token(data, pos, w) || !pgm_token(data, pos, h) || !pgm_token(data, pos, maxval)) {
    throw InputError(path.string() + ": malformed PGM header");
  }
  if (w <= 0 || h <= 0) throw InputError(path.string() + ": PGM has non-positive dimensions");
  if (maxval <= 0 || maxval > 255) {
    throw InputError(path.string() + ": PGM maxval " + std::to_string(maxval) + " is not 8-bit");
  }
  if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos]))) {
    throw InputError(path.string() + ": malformed PGM header");
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (data.size() - pos < n) throw InputError(path.string() + ": truncated PGM pixel data");
  Gray8Image img{{w, h}, std::vector<std::uint8_t>(n)};
  std::memcpy(img.pixels.data(), data.data() + pos, n);
  return img;
}

Gray8Image decode_png(const std::string& data, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, data.data(), data.size())) {
    throw InputError(path.string() + ": " + image.message);
  }
  if ((image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_LINEAR)) != 0) {
    png_image_free(&image);
    throw InputError(path.string() + ": PNG is not 8-bit grayscale");
  }
  image.format = PNG_FORMAT_GRAY;
  Gray8Image img{{static_cast<int>(image.width), static_cast<int>(image.height)},
                 std::vector<std::uint8_t>(PNG_IMAGE_SIZE(image))};
  if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw InputError(path.string() + ": " + msg);
  }
  return img;
}

}  // namespace

Gray8Image read_gray8(const std::filesystem::path& path) {
  const std::string data = read_file_bytes(path);
  if (data.size() >= 2 && data[0] == 'P' && data[1] == '5') return decode_pgm(data, path);
  if (data.size() >= 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(data.data()), 0, 8) == 0) {
    return decode_png(data, path);
  }
  throw InputError(path.string() + ": not a binary PGM or PNG file");
}

void write_pgm(const std::filesystem::path& path, const Gray8Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "P5\n" << image.size.width << ' ' << image.size.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw InputError("write failed: " + path.string());
}

namespace {

void write_png_raw(const std::filesystem::path& path, ImageSize size, png_uint_32 format,
                   const std::uint8_t* pixels) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(size.width);
  image.height = static_cast<png_uint_32>(size.height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels, 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw InputError("cannot write " + path.string() + ": " + msg);
  }
}

}  // namespace

void write_png_gray(const std::filesystem::path& path, const Gray8Image& image) {
  write_png_raw(path, image.size, PNG_FORMAT_GRAY, image.pixels.data());
}

void write_png_colormap(const std::filesystem::path& path, const Gray8Image& image,
                        const std::array<std::array<std::uint8_t, 3>, 256>& lut) {
  std::vector<std::uint8_t> rgb(image.pixels.size() * 3);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const auto& c = lut[image.pixels[i]];
    rgb[3 * i] = c[0];
    rgb[3 * i + 1] = c[1];
    rgb[3 * i + 2] = c[2];
  }
  write_png_raw(path, image.size, PNG_FORMAT_RGB, rgb.data());
}

const std::array<std::array<std::uint8_t, 3>, 256>& heat_colormap() {
  static const auto table = [] {
    std::array<std::array<std::uint8_t, 3>, 256> t{};
    for (int level = 0; level < 256; ++level) {
      const double v = level / 255.0;
      for (int c = 0; c < 3; ++c) {
        const double x = std::clamp(3.0 * v - c, 0.0, 1.0);
        t[level][c] = static_cast<std::uint8_t>(std::lround(255.0 * x));
      }
    }
    return t;
  }();
  return table;
}

}  // namespace gazesal
