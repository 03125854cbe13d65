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

#include "cbse/video_io.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

namespace cbse {

FrameSequence::FrameSequence(int width, int height, std::vector<PlaneU8> frames)
    : width_(width), height_(height), frames_(std::move(frames)) {
  Require(width > 0 && height > 0, "frame dimensions must be positive");
  Require(!frames_.empty(), "frame sequence must contain at least one frame");
  for (const auto& f : frames_) {
    Require(f.width() == width && f.height() == height,
            "all frames must share the sequence dimensions");
  }
}

StereoSequence::StereoSequence(FrameSequence l, FrameSequence r)
    : left(std::move(l)), right(std::move(r)) {
  Require(left.width() == right.width() && left.height() == right.height() &&
              left.frame_count() == right.frame_count(),
          "left and right views must agree on dimensions and frame count");
}

FrameSequence ReadYuv420(const std::filesystem::path& path, int width, int height) {
  Require(width > 0 && height > 0, "width and height must be positive");
  Require(width % 2 == 0 && height % 2 == 0, "YUV 4:2:0 needs even width and height");
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) Fail(ErrorCode::kIo, path.string() + ": file not found");

  const std::uintmax_t luma = static_cast<std::uintmax_t>(width) * height;
  const std::uintmax_t stride = luma * 3 / 2;
  if (file_size == 0) Fail(ErrorCode::kIo, path.string() + ": zero frames");
  if (file_size % stride != 0) {
    Fail(ErrorCode::kIo, path.string() + ": truncated frame (size " +
                             std::to_string(file_size) + " is not a multiple of " +
                             std::to_string(stride) + ")");
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, path.string() + ": cannot open");
  const auto count = static_cast<std::size_t>(file_size / stride);
  std::vector<PlaneU8> frames;
  frames.reserve(count);
  std::vector<char> chroma(static_cast<std::size_t>(stride - luma));
  for (std::size_t t = 0; t < count; ++t) {
    PlaneU8 frame(width, height);
    in.read(reinterpret_cast<char*>(frame.data().data()),
            static_cast<std::streamsize>(luma));
    in.read(chroma.data(), static_cast<std::streamsize>(chroma.size()));
    if (!in) Fail(ErrorCode::kIo, path.string() + ": read error");
    frames.push_back(std::move(frame));
  }
  return FrameSequence(width, height, std::move(frames));
}

void WriteYuv420(const std::filesystem::path& path, const FrameSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, path.string() + ": cannot create");
  const std::vector<char> chroma(
      static_cast<std::size_t>(seq.width()) * seq.height() / 2, static_cast<char>(128));
  for (const auto& frame : seq.frames()) {
    out.write(reinterpret_cast<const char*>(frame.data().data()),
              static_cast<std::streamsize>(frame.size()));
    out.write(chroma.data(), static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) Fail(ErrorCode::kIo, path.string() + ": write error");
}

std::vector<std::uint8_t> LumaBytes(const FrameSequence& seq) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(static_cast<std::size_t>(seq.width()) * seq.height() * seq.frame_count());
  for (const auto& frame : seq.frames()) {
    bytes.insert(bytes.end(), frame.data().begin(), frame.data().end());
  }
  return bytes;
}

FrameSequence ApplySyntheticFog(const FrameSequence& seq, double t) {
  Require(t >= 0.0 && t <= 1.0, "fog blend factor must lie in [0, 1]");
  std::vector<PlaneU8> frames;
  frames.reserve(seq.frame_count());
  for (const auto& frame : seq.frames()) {
    PlaneU8 out(frame.width(), frame.height());
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const double s = frame.data()[i];
      // s + t*(255-s) is the same blend written so that it stays monotone in t.
      out.data()[i] = static_cast<std::uint8_t>(std::lround(s + t * (255.0 - s)));
    }
    frames.push_back(std::move(out));
  }
  return FrameSequence(seq.width(), seq.height(), std::move(frames));
}

StereoSequence ApplySyntheticFog(const StereoSequence& seq, double t) {
  return StereoSequence(ApplySyntheticFog(seq.left, t), ApplySyntheticFog(seq.right, t));
}

}  // namespace cbse
