// Copyright 2026 The CBSE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBSE_PLANE_HPP_
#define CBSE_PLANE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cbse/error.hpp"

namespace cbse {

// Row-major 2-D sample grid.
template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {
    Require(width > 0 && height > 0, "plane dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& operator()(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
  const T* row(int y) const {
    return data_.data() + static_cast<std::size_t>(y) * width_;
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(const Plane& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  template <typename U>
  bool same_shape(const Plane<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using PlaneU8 = Plane<std::uint8_t>;
using PlaneD = Plane<double>;

// Dense x-fastest 3-D volume (x, y, t).
template <typename T>
class Volume {
 public:
  Volume() = default;
  Volume(int width, int height, int frames, T fill = T{})
      : width_(width), height_(height), frames_(frames),
        data_(static_cast<std::size_t>(width) * height * frames, fill) {
    Require(width > 0 && height > 0 && frames > 0,
            "volume dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int frames() const { return frames_; }
  std::size_t size() const { return data_.size(); }
  std::size_t frame_stride() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  std::size_t index(int x, int y, int t) const {
    return (static_cast<std::size_t>(t) * height_ + y) * width_ + x;
  }
  T& operator()(int x, int y, int t) { return data_[index(x, y, t)]; }
  const T& operator()(int x, int y, int t) const { return data_[index(x, y, t)]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  int width_ = 0;
  int height_ = 0;
  int frames_ = 0;
  std::vector<T> data_;
};

using VolumeD = Volume<double>;

}  // namespace cbse

#endif  // CBSE_PLANE_HPP_
