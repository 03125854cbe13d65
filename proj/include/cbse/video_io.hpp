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

#ifndef CBSE_VIDEO_IO_HPP_
#define CBSE_VIDEO_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "cbse/plane.hpp"

namespace cbse {

// Decoded 8-bit luma video. All frames share the sequence dimensions.
class FrameSequence {
 public:
  FrameSequence() = default;
  FrameSequence(int width, int height, std::vector<PlaneU8> frames);

  int width() const { return width_; }
  int height() const { return height_; }
  int frame_count() const { return static_cast<int>(frames_.size()); }
  const PlaneU8& frame(int t) const { return frames_[t]; }
  const std::vector<PlaneU8>& frames() const { return frames_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<PlaneU8> frames_;
};

struct StereoSequence {
  FrameSequence left;
  FrameSequence right;

  StereoSequence() = default;
  StereoSequence(FrameSequence l, FrameSequence r);

  int width() const { return left.width(); }
  int height() const { return left.height(); }
  int frame_count() const { return left.frame_count(); }
};

// Raw planar YUV 4:2:0 8-bit (Y, U, V per frame, frames back to back).
// Chroma is read past and discarded. Throws Error(kIo) on missing files,
// stride mismatches ("truncated frame") and empty files.
FrameSequence ReadYuv420(const std::filesystem::path& path, int width, int height);

// Writes luma with mid-gray (128) chroma planes.
void WriteYuv420(const std::filesystem::path& path, const FrameSequence& seq);

// Concatenated luma planes, frame-sequential.
std::vector<std::uint8_t> LumaBytes(const FrameSequence& seq);

// Blends every sample toward white: round((1-t)*s + t*255).
FrameSequence ApplySyntheticFog(const FrameSequence& seq, double t);
StereoSequence ApplySyntheticFog(const StereoSequence& seq, double t);

}  // namespace cbse

#endif  // CBSE_VIDEO_IO_HPP_
