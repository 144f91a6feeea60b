// Copyright 2026 The cvfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

// Core value types shared by the codec, the accumulator and the exporters.
//
// All pixel grids are row-major with channels interleaved: sample (r, c, ch)
// lives at index (r * width + c) * channels + ch.

#ifndef CVFIELD_TYPES_H_
#define CVFIELD_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cvfield {

struct Frame {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  Frame() = default;
  Frame(int h, int w, int ch, std::uint8_t fill = 0)
      : height(h),
        width(w),
        channels(ch),
        data(static_cast<std::size_t>(h) * w * ch, fill) {}

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * width;
  }
  std::size_t index(int r, int c, int ch = 0) const {
    return (static_cast<std::size_t>(r) * width + c) * channels + ch;
  }
  std::uint8_t at(int r, int c, int ch = 0) const { return data[index(r, c, ch)]; }
  std::uint8_t& at(int r, int c, int ch = 0) { return data[index(r, c, ch)]; }

  bool operator==(const Frame&) const = default;
};

// Per-pixel signed correction added after motion compensation.
// Samples lie in [-255, 255].
struct ResidualPlane {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::int16_t> data;

  ResidualPlane() = default;
  ResidualPlane(int h, int w, int ch)
      : height(h),
        width(w),
        channels(ch),
        data(static_cast<std::size_t>(h) * w * ch, 0) {}

  std::size_t index(int r, int c, int ch = 0) const {
    return (static_cast<std::size_t>(r) * width + c) * channels + ch;
  }

  bool operator==(const ResidualPlane&) const = default;
};

// Integer displacement (rows, cols). A pixel i with vector v references
// location i - v in the previous frame.
struct MotionVector {
  int dr = 0;
  int dc = 0;

  bool operator==(const MotionVector&) const = default;
};

// One vector per block of a fixed block grid. Edge blocks are truncated when
// the frame dimensions are not multiples of block_size.
struct MotionField {
  int height = 0;
  int width = 0;
  int block_size = 16;
  int grid_rows = 0;
  int grid_cols = 0;
  std::vector<MotionVector> vectors;

  MotionField() = default;
  MotionField(int h, int w, int block)
      : height(h),
        width(w),
        block_size(block),
        grid_rows((h + block - 1) / block),
        grid_cols((w + block - 1) / block),
        vectors(static_cast<std::size_t>(grid_rows) * grid_cols) {}

  const MotionVector& block(int br, int bc) const {
    return vectors[static_cast<std::size_t>(br) * grid_cols + bc];
  }
  MotionVector& block(int br, int bc) {
    return vectors[static_cast<std::size_t>(br) * grid_cols + bc];
  }
  // Vector governing pixel (r, c).
  const MotionVector& at_pixel(int r, int c) const {
    return block(r / block_size, c / block_size);
  }

  bool operator==(const MotionField&) const = default;
};

// Dense H x W x 2 grid of (dr, dc) pixel offsets.
struct DisplacementField {
  int height = 0;
  int width = 0;
  std::vector<std::int16_t> data;

  DisplacementField() = default;
  DisplacementField(int h, int w)
      : height(h), width(w), data(static_cast<std::size_t>(h) * w * 2, 0) {}

  std::size_t index(int r, int c) const {
    return (static_cast<std::size_t>(r) * width + c) * 2;
  }
  int dr(int r, int c) const { return data[index(r, c)]; }
  int dc(int r, int c) const { return data[index(r, c) + 1]; }

  bool operator==(const DisplacementField&) const = default;
};

struct GopConfig {
  int block_size = 16;
  int search_range = 8;
  // One I-frame followed by gop_length - 1 P-frames.
  int gop_length = 12;

  bool operator==(const GopConfig&) const = default;
};

struct PFrame {
  MotionField motion;
  ResidualPlane residual;

  bool operator==(const PFrame&) const = default;
};

struct EncodedGop {
  Frame iframe;
  std::vector<PFrame> pframes;
  GopConfig config;

  std::size_t frame_count() const { return pframes.size() + 1; }

  bool operator==(const EncodedGop&) const = default;
};

}  // namespace cvfield

#endif  // CVFIELD_TYPES_H_
