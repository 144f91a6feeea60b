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

// CVB1 container.
//
//   offset  size  field
//   0       4     magic "CVB1"
//   4       4     width (u32 LE)
//   8       4     height (u32 LE)
//   12      1     channels (1 or 3)
//   13      1     block_size
//   14      1     search_range
//   15      2     gop_length (u16 LE)
//   17      4     frame_count (u32 LE)
//   21      ...   frames
//
// Each frame starts with a type byte, 0 for an I-frame and 1 for a P-frame.
// Frame k is an I-frame exactly when k % gop_length == 0. An I-frame carries
// width * height * channels raw samples. A P-frame carries the block-grid
// motion vectors in row-major order (dr then dc per block), followed by all
// residual samples in row-major, channel-interleaved order. Every vector
// component and residual sample is zigzag mapped and written as a base-128
// varint.

#ifndef CVFIELD_BITSTREAM_H_
#define CVFIELD_BITSTREAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cvfield/types.h"

namespace cvfield {

inline constexpr std::size_t kContainerHeaderSize = 21;
inline constexpr std::size_t kMaxVarintBytes = 10;
inline constexpr std::uint8_t kIFrameTag = 0;
inline constexpr std::uint8_t kPFrameTag = 1;

constexpr std::uint64_t ZigzagEncode(std::int64_t n) {
  return (static_cast<std::uint64_t>(n) << 1) ^
         static_cast<std::uint64_t>(n >> 63);
}

constexpr std::int64_t ZigzagDecode(std::uint64_t u) {
  return static_cast<std::int64_t>(u >> 1) ^ -static_cast<std::int64_t>(u & 1);
}

void AppendVarint(std::uint64_t value, std::vector<std::uint8_t>& out);

// Decodes a varint starting at `pos` and advances `pos` past it. Throws
// ParseError on truncation, on more than kMaxVarintBytes bytes, on values
// that overflow 64 bits and on non-minimal encodings.
std::uint64_t ReadVarint(std::span<const std::uint8_t> bytes, std::size_t& pos);

struct ContainerHeader {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t channels = 0;
  std::uint8_t block_size = 0;
  std::uint8_t search_range = 0;
  std::uint16_t gop_length = 0;
  std::uint32_t frame_count = 0;

  bool operator==(const ContainerHeader&) const = default;
};

// Header describing `gops`. Throws InvalidArgument if the GOPs disagree with
// each other or do not fit the field widths.
ContainerHeader MakeHeader(std::span<const EncodedGop> gops);

std::vector<std::uint8_t> WriteContainer(std::span<const EncodedGop> gops,
                                         const ContainerHeader& header);

struct Container {
  ContainerHeader header;
  std::vector<EncodedGop> gops;
};

// Safe on arbitrary input. Every rejection is a ParseError carrying the byte
// offset of the problem.
Container ParseContainer(std::span<const std::uint8_t> bytes);

}  // namespace cvfield

#endif  // CVFIELD_BITSTREAM_H_
