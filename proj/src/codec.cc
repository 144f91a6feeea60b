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

#include "cvfield/codec.h"

#include <algorithm>
#include <cstdlib>
#include <iterator>
#include <limits>
#include <string>

#include "cvfield/error.h"

namespace cvfield {
namespace {

bool SameShape(const Frame& a, const Frame& b) {
  return a.height == b.height && a.width == b.width && a.channels == b.channels;
}

std::string Dims(int h, int w, int ch) {
  return std::to_string(h) + "x" + std::to_string(w) + "x" + std::to_string(ch);
}

// SAD of the block at (r0, c0) of size rows x cols in `cur` against the block
// at (r0 - dr, c0 - dc) in `ref`. Returns as soon as the running sum exceeds
// `limit`; the returned value is then only known to be > limit.
std::uint64_t BlockSad(const Frame& ref, const Frame& cur, int r0, int c0,
                       int rows, int cols, int dr, int dc,
                       std::uint64_t limit) {
  const std::size_t span = static_cast<std::size_t>(cols) * cur.channels;
  std::uint64_t sad = 0;
  for (int r = 0; r < rows; ++r) {
    const std::uint8_t* a = &cur.data[cur.index(r0 + r, c0)];
    const std::uint8_t* b = &ref.data[ref.index(r0 + r - dr, c0 - dc)];
    std::uint32_t row_sad = 0;
    for (std::size_t k = 0; k < span; ++k) {
      row_sad += static_cast<std::uint32_t>(std::abs(int{a[k]} - int{b[k]}));
    }
    sad += row_sad;
    if (sad > limit) return sad;
  }
  return sad;
}

}  // namespace

void ValidateConfig(const GopConfig& config) {
  if (config.block_size < 1) {
    throw InvalidArgument("block_size must be >= 1");
  }
  if (config.search_range < 0) {
    throw InvalidArgument("search_range must be >= 0");
  }
  if (config.gop_length < 1) {
    throw InvalidArgument("gop_length must be >= 1");
  }
}

BlockMatch EstimateBlockMotion(const Frame& ref, const Frame& cur, int origin_row,
                               int origin_col, const GopConfig& config) {
  ValidateConfig(config);
  if (!SameShape(ref, cur)) {
    throw InvalidArgument("reference and current frame dimensions differ");
  }
  const int bs = config.block_size;
  if (origin_row < 0 || origin_col < 0 || origin_row >= cur.height ||
      origin_col >= cur.width || origin_row % bs != 0 || origin_col % bs != 0) {
    throw InvalidArgument("block origin is not on the block grid");
  }
  const int rows = std::min(bs, cur.height - origin_row);
  const int cols = std::min(bs, cur.width - origin_col);
  const int range = config.search_range;

  // Reference rows are [origin_row - dr, origin_row - dr + rows), which must
  // stay inside [0, height).
  const int dr_lo = std::max(-range, origin_row + rows - cur.height);
  const int dr_hi = std::min(range, origin_row);
  const int dc_lo = std::max(-range, origin_col + cols - cur.width);
  const int dc_hi = std::min(range, origin_col);

  BlockMatch best;
  best.sad = BlockSad(ref, cur, origin_row, origin_col, rows, cols, 0, 0,
                      std::numeric_limits<std::uint64_t>::max());
  int best_l1 = 0;
  for (int dr = dr_lo; dr <= dr_hi; ++dr) {
    for (int dc = dc_lo; dc <= dc_hi; ++dc) {
      if (best.sad == 0 && std::abs(dr) + std::abs(dc) >= best_l1) continue;
      const std::uint64_t sad =
          BlockSad(ref, cur, origin_row, origin_col, rows, cols, dr, dc, best.sad);
      const int l1 = std::abs(dr) + std::abs(dc);
      // Strict improvement only: scanning row-major keeps the first candidate
      // among equals.
      if (sad < best.sad || (sad == best.sad && l1 < best_l1)) {
        best.sad = sad;
        best.vector = {dr, dc};
        best_l1 = l1;
      }
    }
  }
  return best;
}

MotionField EstimateMotion(const Frame& ref, const Frame& cur,
                           const GopConfig& config) {
  ValidateConfig(config);
  MotionField motion(cur.height, cur.width, config.block_size);
  for (int br = 0; br < motion.grid_rows; ++br) {
    for (int bc = 0; bc < motion.grid_cols; ++bc) {
      motion.block(br, bc) =
          EstimateBlockMotion(ref, cur, br * config.block_size,
                              bc * config.block_size, config)
              .vector;
    }
  }
  return motion;
}

DisplacementField ExpandBlockField(const MotionField& motion) {
  DisplacementField out(motion.height, motion.width);
  for (int r = 0; r < motion.height; ++r) {
    for (int c = 0; c < motion.width; ++c) {
      const MotionVector& v = motion.at_pixel(r, c);
      const std::size_t k = out.index(r, c);
      out.data[k] = static_cast<std::int16_t>(v.dr);
      out.data[k + 1] = static_cast<std::int16_t>(v.dc);
    }
  }
  return out;
}

void CheckMotionInBounds(const MotionField& motion) {
  const int bs = motion.block_size;
  for (int br = 0; br < motion.grid_rows; ++br) {
    for (int bc = 0; bc < motion.grid_cols; ++bc) {
      const MotionVector& v = motion.block(br, bc);
      const int r0 = br * bs;
      const int c0 = bc * bs;
      const int r1 = std::min(r0 + bs, motion.height);
      const int c1 = std::min(c0 + bs, motion.width);
      // First pixel of the block in row-major order whose reference leaves the
      // frame.
      for (int r = r0; r < r1; ++r) {
        const bool row_ok = r - v.dr >= 0 && r - v.dr < motion.height;
        for (int c = c0; c < c1; ++c) {
          const bool col_ok = c - v.dc >= 0 && c - v.dc < motion.width;
          if (!row_ok || !col_ok) {
            throw DataError("motion vector (" + std::to_string(v.dr) + ", " +
                            std::to_string(v.dc) + ") at pixel (" +
                            std::to_string(r) + ", " + std::to_string(c) +
                            ") references outside the frame");
          }
        }
      }
    }
  }
}

Frame PredictFrame(const Frame& ref, const MotionField& motion) {
  if (ref.height != motion.height || ref.width != motion.width) {
    throw InvalidArgument("motion field " + Dims(motion.height, motion.width, 2) +
                          " does not match frame " +
                          Dims(ref.height, ref.width, ref.channels));
  }
  CheckMotionInBounds(motion);
  Frame out(ref.height, ref.width, ref.channels);
  const int bs = motion.block_size;
  for (int r = 0; r < ref.height; ++r) {
    for (int bc = 0; bc < motion.grid_cols; ++bc) {
      const MotionVector& v = motion.block(r / bs, bc);
      const int c0 = bc * bs;
      const int c1 = std::min(c0 + bs, ref.width);
      std::copy_n(&ref.data[ref.index(r - v.dr, c0 - v.dc)],
                  static_cast<std::size_t>(c1 - c0) * ref.channels,
                  &out.data[out.index(r, c0)]);
    }
  }
  return out;
}

ResidualPlane ComputeResidual(const Frame& cur, const Frame& predicted) {
  if (!SameShape(cur, predicted)) {
    throw InvalidArgument(
        "residual of mismatched frames " +
        Dims(cur.height, cur.width, cur.channels) + " vs " +
        Dims(predicted.height, predicted.width, predicted.channels));
  }
  ResidualPlane out(cur.height, cur.width, cur.channels);
  for (std::size_t k = 0; k < cur.data.size(); ++k) {
    out.data[k] =
        static_cast<std::int16_t>(int{cur.data[k]} - int{predicted.data[k]});
  }
  return out;
}

Frame ApplyResidual(const Frame& predicted, const ResidualPlane& residual) {
  if (predicted.height != residual.height || predicted.width != residual.width ||
      predicted.channels != residual.channels) {
    throw InvalidArgument("residual plane does not match predicted frame");
  }
  Frame out(predicted.height, predicted.width, predicted.channels);
  for (std::size_t k = 0; k < out.data.size(); ++k) {
    out.data[k] = static_cast<std::uint8_t>(
        std::clamp(int{predicted.data[k]} + int{residual.data[k]}, 0, 255));
  }
  return out;
}

EncodedGop EncodeGop(std::span<const Frame> frames, const GopConfig& config) {
  ValidateConfig(config);
  if (frames.empty()) throw InvalidArgument("cannot encode an empty sequence");
  const Frame& first = frames.front();
  if (first.height < 1 || first.width < 1 ||
      (first.channels != 1 && first.channels != 3)) {
    throw InvalidArgument("frame dimensions " +
                          Dims(first.height, first.width, first.channels) +
                          " are not encodable");
  }
  EncodedGop gop;
  gop.config = config;
  gop.iframe = first;
  gop.pframes.reserve(frames.size() - 1);
  Frame reconstructed = first;
  for (std::size_t t = 1; t < frames.size(); ++t) {
    const Frame& cur = frames[t];
    if (!SameShape(cur, first)) {
      throw InvalidArgument("frame " + std::to_string(t) + " has dimensions " +
                            Dims(cur.height, cur.width, cur.channels) +
                            ", expected " +
                            Dims(first.height, first.width, first.channels));
    }
    PFrame p;
    p.motion = EstimateMotion(reconstructed, cur, config);
    const Frame predicted = PredictFrame(reconstructed, p.motion);
    p.residual = ComputeResidual(cur, predicted);
    reconstructed = ApplyResidual(predicted, p.residual);
    gop.pframes.push_back(std::move(p));
  }
  return gop;
}

std::vector<Frame> DecodeGop(const EncodedGop& gop) {
  std::vector<Frame> frames;
  frames.reserve(gop.frame_count());
  frames.push_back(gop.iframe);
  for (const PFrame& p : gop.pframes) {
    frames.push_back(ApplyResidual(PredictFrame(frames.back(), p.motion), p.residual));
  }
  return frames;
}

std::vector<EncodedGop> EncodeVideo(std::span<const Frame> frames,
                                    const GopConfig& config) {
  ValidateConfig(config);
  if (frames.empty()) throw InvalidArgument("cannot encode an empty sequence");
  std::vector<EncodedGop> gops;
  const std::size_t gop_length = static_cast<std::size_t>(config.gop_length);
  for (std::size_t start = 0; start < frames.size(); start += gop_length) {
    const std::size_t n = std::min(gop_length, frames.size() - start);
    gops.push_back(EncodeGop(frames.subspan(start, n), config));
    if (!SameShape(gops.back().iframe, frames.front())) {
      throw InvalidArgument("frame " + std::to_string(start) +
                            " has inconsistent dimensions");
    }
  }
  return gops;
}

std::vector<Frame> DecodeVideo(std::span<const EncodedGop> gops) {
  std::vector<Frame> frames;
  for (const EncodedGop& gop : gops) {
    std::vector<Frame> decoded = DecodeGop(gop);
    std::move(decoded.begin(), decoded.end(), std::back_inserter(frames));
  }
  return frames;
}

}  // namespace cvfield
