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

// Raw pixel input and output: YUV4MPEG2 (4:2:0 and mono) and headerless
// interleaved frames.

#ifndef CVFIELD_INGEST_H_
#define CVFIELD_INGEST_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cvfield/types.h"

namespace cvfield {

// Full-range BT.601 in 16-bit fixed point, rounded half up.
//
//   R = Y + 1.402 (V - 128)
//   G = Y - 0.344136 (U - 128) - 0.714136 (V - 128)
//   B = Y + 1.772 (U - 128)
std::array<std::uint8_t, 3> YuvToRgb(int y, int u, int v);

//   Y = 0.299 R + 0.587 G + 0.114 B
//   U = 128 - 0.168736 R - 0.331264 G + 0.5 B
//   V = 128 + 0.5 R - 0.418688 G - 0.081312 B
std::array<std::uint8_t, 3> RgbToYuv(int r, int g, int b);

// Parses a YUV4MPEG2 stream. C420 variants are up-sampled (nearest chroma
// sample) and converted to RGB; Cmono yields single-channel frames. A missing
// C tag means 4:2:0. Throws ParseError on a bad signature, an unsupported
// colorspace or a truncated frame.
std::vector<Frame> ReadY4m(std::span<const std::uint8_t> bytes);

// Writes Cmono for single-channel frames and C420 (2x2 mean chroma) for RGB.
// The RGB path is lossy unless every pixel is gray.
std::vector<std::uint8_t> WriteY4m(std::span<const Frame> frames,
                                   int fps_num = 25, int fps_den = 1);

// Splits interleaved row-major samples into frames. Throws DataError when
// the length is not a multiple of the frame size.
std::vector<Frame> ReadRawFrames(std::span<const std::uint8_t> bytes, int width,
                                 int height, int channels);

std::vector<std::uint8_t> WriteRawFrames(std::span<const Frame> frames);

}  // namespace cvfield

#endif  // CVFIELD_INGEST_H_
