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

// Minimal lossless block-based I/P codec.
//
// A P-frame is reconstructed from the previous frame as
//
//   I(t)[i] = I(t-1)[i - T(t)[i]] + Delta(t)[i]
//
// where T is a per-block integer motion field and Delta the residual. No
// transform or entropy stage is applied, so decode(encode(x)) == x exactly.

#ifndef CVFIELD_CODEC_H_
#define CVFIELD_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cvfield/types.h"

namespace cvfield {

// Throws InvalidArgument unless block_size >= 1, search_range >= 0 and
// gop_length >= 1.
void ValidateConfig(const GopConfig& config);

struct BlockMatch {
  MotionVector vector;
  std::uint64_t sad = 0;
};

// Full search over every displacement with both components in
// [-search_range, search_range] whose reference block (origin - vector) lies
// inside the frame. Ties go to the smallest |dr| + |dc|, then to the first
// candidate in row-major (dr, dc) order. Edge blocks are matched over their
// truncated extent.
BlockMatch EstimateBlockMotion(const Frame& ref, const Frame& cur, int origin_row,
                               int origin_col, const GopConfig& config);

// Runs EstimateBlockMotion on every block of the grid.
MotionField EstimateMotion(const Frame& ref, const Frame& cur,
                           const GopConfig& config);

// Piecewise-constant per-pixel expansion of a block field.
DisplacementField ExpandBlockField(const MotionField& motion);

// Throws DataError naming the first offending pixel if any block references
// a location outside the frame.
void CheckMotionInBounds(const MotionField& motion);

// out[i] = ref[i - T[i]] for every pixel and channel.
Frame PredictFrame(const Frame& ref, const MotionField& motion);

// cur - predicted, per sample.
ResidualPlane ComputeResidual(const Frame& cur, const Frame& predicted);

// predicted + residual, clamped into [0, 255].
Frame ApplyResidual(const Frame& predicted, const ResidualPlane& residual);

// Encodes the whole sequence as one GOP: frames[0] becomes the I-frame and
// every following frame a P-frame predicted from the reconstructed previous
// frame.
EncodedGop EncodeGop(std::span<const Frame> frames, const GopConfig& config);

// Applies the P-frame recurrence; returns frame_count() frames.
std::vector<Frame> DecodeGop(const EncodedGop& gop);

// Splits the sequence into consecutive GOPs of config.gop_length frames (the
// last one may be shorter) and encodes each.
std::vector<EncodedGop> EncodeVideo(std::span<const Frame> frames,
                                    const GopConfig& config);

std::vector<Frame> DecodeVideo(std::span<const EncodedGop> gops);

}  // namespace cvfield

#endif  // CVFIELD_CODEC_H_
