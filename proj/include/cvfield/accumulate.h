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

// Back-tracing of P-frame motion to the GOP's I-frame.
//
// Let mu_t(i) = i - T(t)[i] be the location pixel i of frame t references in
// frame t - 1. Tracing pixel i of frame t back to the I-frame gives
//
//   J(t)[i] = mu_1(mu_2(... mu_t(i)))
//   D(t)[i] = i - J(t)[i]
//   R(t)[i] = sum over s = 1..t of Delta(s)[mu_{s+1}(... mu_t(i))]
//
// after which every frame depends on the I-frame alone:
//
//   I(t)[i] = I(0)[i - D(t)[i]] + R(t)[i]
//
// AccumulateStep computes (D, R) for frame t from frame t - 1 in one gather
// pass per pixel:
//
//   D(t)[i] = D(t-1)[i - T(t)[i]] + T(t)[i]
//   R(t)[i] = R(t-1)[i - T(t)[i]] + Delta(t)[i]
//
// BacktraceCompose evaluates the definitions directly, walking every pixel
// through all t maps. It costs O(t) per pixel and exists as the reference
// the feed-forward path is tested against.

#ifndef CVFIELD_ACCUMULATE_H_
#define CVFIELD_ACCUMULATE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cvfield/types.h"

namespace cvfield {

struct AccumulatorState {
  int frame_index = 0;
  int height = 0;
  int width = 0;
  int channels = 0;
  // H x W x 2, (dr, dc) per pixel.
  std::vector<std::int16_t> displacement;
  // H x W x C.
  std::vector<std::int16_t> residual;
  // Number of references that fell outside the frame and were clamped (only
  // non-zero under OutOfBounds::kClamp).
  std::size_t clamped = 0;

  AccumulatorState() = default;
  // The all-zero state of the I-frame.
  AccumulatorState(int h, int w, int ch)
      : height(h),
        width(w),
        channels(ch),
        displacement(static_cast<std::size_t>(h) * w * 2, 0),
        residual(static_cast<std::size_t>(h) * w * ch, 0) {}

  DisplacementField displacement_field() const;
  ResidualPlane residual_plane() const;

  // Compares the fields only.
  bool SameFields(const AccumulatorState& other) const {
    return frame_index == other.frame_index && height == other.height &&
           width == other.width && channels == other.channels &&
           displacement == other.displacement && residual == other.residual;
  }
};

// Row-major H x W grid of traced (row, col) coordinates.
struct TracedLocationGrid {
  int height = 0;
  int width = 0;
  std::vector<std::int16_t> coords;

  int row(int r, int c) const {
    return coords[(static_cast<std::size_t>(r) * width + c) * 2];
  }
  int col(int r, int c) const {
    return coords[(static_cast<std::size_t>(r) * width + c) * 2 + 1];
  }
};

enum class OutOfBounds {
  // Throw DataError on a reference outside the frame.
  kReject,
  // Clamp the reference into the frame and count it in
  // AccumulatorState::clamped. Meant for streams not produced by this codec.
  kClamp,
};

// One feed-forward step. `motion` is the per-pixel expansion of frame t's
// motion field; the result has frame_index prev.frame_index + 1.
AccumulatorState AccumulateStep(const AccumulatorState& prev,
                                const DisplacementField& motion,
                                const ResidualPlane& residual,
                                OutOfBounds policy = OutOfBounds::kReject);

// States for t = 0 .. gop.frame_count() - 1, state 0 being all zero.
std::vector<AccumulatorState> AccumulateGop(
    const EncodedGop& gop, OutOfBounds policy = OutOfBounds::kReject);

struct BacktraceResult {
  TracedLocationGrid traced;
  AccumulatorState state;
};

// Explicit composition of the reference maps of frames t, t-1, ..., 1.
// Throws InvalidArgument when t is outside [0, gop.frame_count()).
BacktraceResult BacktraceCompose(const EncodedGop& gop, int t);

// out[i] = iframe[i - D[i]] + R[i], clamped into [0, 255]. Throws
// InvalidArgument on a dimension mismatch and DataError on a traced location
// outside the frame.
Frame ReconstructDecoupled(const Frame& iframe, const AccumulatorState& state);

}  // namespace cvfield

#endif  // CVFIELD_ACCUMULATE_H_
