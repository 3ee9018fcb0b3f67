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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace scorpion::vision {

/// Pinhole camera with two-term radial distortion. Pixel centers sit at
/// integer coordinates.
struct Intrinsics {
  double fx = 500.0, fy = 500.0;
  double cx = 320.0, cy = 240.0;
  double k1 = 0.0, k2 = 0.0;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Row-major RGB8 raster.
class ImageFrame {
 public:
  ImageFrame() = default;
  ImageFrame(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool contains(double x, double y) const {
    return x >= 0.0 && y >= 0.0 && x <= width_ - 1.0 && y <= height_ - 1.0;
  }

  Rgb at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y);
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
  }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  std::optional<Intrinsics> intrinsics;

  bool operator==(const ImageFrame& o) const {
    return width_ == o.width_ && height_ == o.height_ && data_ == o.data_;
  }

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0, height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Single-channel 0/1 image.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false)
      : width_(width), height_(height),
        bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool get(int x, int y) const { return bits_[idx(x, y)] != 0; }
  void set(int x, int y, bool v) { bits_[idx(x, y)] = v ? 1 : 0; }
  std::size_t count() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  bool operator==(const BinaryMask&) const = default;

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }
  int width_ = 0, height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// 8-bit PNG encoding with fixed settings so identical images give
/// identical bytes.
std::vector<std::uint8_t> encode_png(const ImageFrame& frame);
std::vector<std::uint8_t> encode_png_gray(int width, int height, const std::vector<std::uint8_t>& gray);
void write_png(const std::filesystem::path& path, const ImageFrame& frame);
void write_png_gray(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& gray);
/// Reads any 8-bit PNG and converts it to RGB.
ImageFrame read_png(const std::filesystem::path& path);

}  // namespace scorpion::vision
