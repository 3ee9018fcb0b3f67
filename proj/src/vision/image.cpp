// Copyright 2026 The Scorpion Twin Authors
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

#include "vision/image.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstring>
#include <fstream>

#include "common/error.hpp"

namespace scorpion::vision {

ImageFrame::ImageFrame(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw ArgumentError("image dimensions must be positive");
  data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void no_flush(png_structp) {}

void png_warn(png_structp, png_const_charp) {}

std::vector<std::uint8_t> encode(int width, int height, int color_type, int channels,
                                 const std::uint8_t* pixels) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn);
  if (!png) throw IoError("png: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png: encoding failed");
  }
  {
    png_set_write_fn(png, &out, append_bytes, no_flush);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
    for (int y = 0; y < height; ++y)
      png_write_row(png, const_cast<png_bytep>(pixels + static_cast<std::size_t>(y) * stride));
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace

std::vector<std::uint8_t> encode_png(const ImageFrame& frame) {
  return encode(frame.width(), frame.height(), PNG_COLOR_TYPE_RGB, 3, frame.data().data());
}

std::vector<std::uint8_t> encode_png_gray(int width, int height, const std::vector<std::uint8_t>& gray) {
  if (gray.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw ArgumentError("gray buffer size does not match dimensions");
  return encode(width, height, PNG_COLOR_TYPE_GRAY, 1, gray.data());
}

void write_png(const std::filesystem::path& path, const ImageFrame& frame) { write_file(path, encode_png(frame)); }

void write_png_gray(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& gray) {
  write_file(path, encode_png_gray(width, height, gray));
}

ImageFrame read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw IoError("cannot read png " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  ImageFrame frame(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, frame.data().data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode png " + path.string() + ": " + image.message);
  }
  return frame;
}

}  // namespace scorpion::vision
