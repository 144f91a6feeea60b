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

#include "cvfield/accumulate.h"

#include <algorithm>
#include <limits>
#include <string>

#include "cvfield/codec.h"
#include "cvfield/error.h"

namespace cvfield {
namespace {

std::int16_t SaturatingAdd(int a, int b) {
  return static_cast<std::int16_t>(
      std::clamp(a + b, int{std::numeric_limits<std::int16_t>::min()},
                 int{std::numeric_limits<std::int16_t>::max()}));
}

std::string Pixel(int r, int c) {
  return "(" + std::to_string(r) + ", " + std::to_string(c) + ")";
}

}  // namespace

DisplacementField AccumulatorState::displacement_field() const {
  DisplacementField out(height, width);
  out.data = displacement;
  return out;
}

ResidualPlane AccumulatorState::residual_plane() const {
  ResidualPlane out(height, width, channels);
  out.data = residual;
  return out;
}

AccumulatorState AccumulateStep(const AccumulatorState& prev,
                                const DisplacementField& motion,
                                const ResidualPlane& residual,
                                OutOfBounds policy) {
  const int h = prev.height;
  const int w = prev.width;
  const int ch = prev.channels;
  if (motion.height != h || motion.width != w || residual.height != h ||
      residual.width != w || residual.channels != ch) {
    throw InvalidArgument("accumulate step inputs do not match the state size");
  }
  AccumulatorState next(h, w, ch);
  next.frame_index = prev.frame_index + 1;
  next.clamped = prev.clamped;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t m = motion.index(r, c);
      const int dr = motion.data[m];
      const int dc = motion.data[m + 1];
      int src_r = r - dr;
      int src_c = c - dc;
      if (src_r < 0 || src_r >= h || src_c < 0 || src_c >= w) {
        if (policy == OutOfBounds::kReject) {
          throw DataError("frame " + std::to_string(next.frame_index) +
                          ": pixel " + Pixel(r, c) + " references " +
                          Pixel(src_r, src_c) + " outside the frame");
        }
        src_r = std::clamp(src_r, 0, h - 1);
        src_c = std::clamp(src_c, 0, w - 1);
        ++next.clamped;
      }
      const std::size_t src = static_cast<std::size_t>(src_r) * w + src_c;
      const std::size_t dst = static_cast<std::size_t>(r) * w + c;
      // With a clamped source the composed displacement is rebuilt from the
      // clamped location so the traced point stays inside the frame.
      const int prev_dr = prev.displacement[src * 2];
      const int prev_dc = prev.displacement[src * 2 + 1];
      next.displacement[dst * 2] = SaturatingAdd(prev_dr, r - src_r);
      next.displacement[dst * 2 + 1] = SaturatingAdd(prev_dc, c - src_c);
      for (int k = 0; k < ch; ++k) {
        next.residual[dst * ch + k] =
            SaturatingAdd(prev.residual[src * ch + k], residual.data[dst * ch + k]);
      }
    }
  }
  return next;
}

std::vector<AccumulatorState> AccumulateGop(const EncodedGop& gop,
                                            OutOfBounds policy) {
  const Frame& i = gop.iframe;
  std::vector<AccumulatorState> states;
  states.reserve(gop.frame_count());
  states.emplace_back(i.height, i.width, i.channels);
  for (const PFrame& p : gop.pframes) {
    states.push_back(AccumulateStep(states.back(), ExpandBlockField(p.motion),
                                    p.residual, policy));
  }
  return states;
}

BacktraceResult BacktraceCompose(const EncodedGop& gop, int t) {
  if (t < 0 || static_cast<std::size_t>(t) >= gop.frame_count()) {
    throw InvalidArgument("frame index " + std::to_string(t) +
                          " outside GOP of " +
                          std::to_string(gop.frame_count()) + " frames");
  }
  const int h = gop.iframe.height;
  const int w = gop.iframe.width;
  const int ch = gop.iframe.channels;
  BacktraceResult out;
  out.traced.height = h;
  out.traced.width = w;
  out.traced.coords.resize(static_cast<std::size_t>(h) * w * 2);
  out.state = AccumulatorState(h, w, ch);
  out.state.frame_index = t;

  std::vector<int> sum(static_cast<std::size_t>(ch));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      int loc_r = r;
      int loc_c = c;
      std::fill(sum.begin(), sum.end(), 0);
      // Frame s contributes its residual at the location traced to frame s,
      // then moves the trace one frame back.
      for (int s = t; s >= 1; --s) {
        const PFrame& p = gop.pframes[static_cast<std::size_t>(s - 1)];
        const std::size_t base = p.residual.index(loc_r, loc_c);
        for (int k = 0; k < ch; ++k) sum[k] += p.residual.data[base + k];
        const MotionVector& v = p.motion.at_pixel(loc_r, loc_c);
        loc_r -= v.dr;
        loc_c -= v.dc;
        if (loc_r < 0 || loc_r >= h || loc_c < 0 || loc_c >= w) {
          throw DataError("frame " + std::to_string(s) + ": trace of pixel " +
                          Pixel(r, c) + " leaves the frame at " +
                          Pixel(loc_r, loc_c));
        }
      }
      const std::size_t dst = static_cast<std::size_t>(r) * w + c;
      out.traced.coords[dst * 2] = static_cast<std::int16_t>(loc_r);
      out.traced.coords[dst * 2 + 1] = static_cast<std::int16_t>(loc_c);
      out.state.displacement[dst * 2] = static_cast<std::int16_t>(r - loc_r);
      out.state.displacement[dst * 2 + 1] = static_cast<std::int16_t>(c - loc_c);
      for (int k = 0; k < ch; ++k) {
        out.state.residual[dst * ch + k] = SaturatingAdd(sum[k], 0);
      }
    }
  }
  return out;
}

Frame ReconstructDecoupled(const Frame& iframe, const AccumulatorState& state) {
  if (iframe.height != state.height || iframe.width != state.width ||
      iframe.channels != state.channels) {
    throw InvalidArgument("accumulator state does not match the I-frame");
  }
  const int h = iframe.height;
  const int w = iframe.width;
  const int ch = iframe.channels;
  Frame out(h, w, ch);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t dst = static_cast<std::size_t>(r) * w + c;
      const int src_r = r - state.displacement[dst * 2];
      const int src_c = c - state.displacement[dst * 2 + 1];
      if (src_r < 0 || src_r >= h || src_c < 0 || src_c >= w) {
        throw DataError("pixel " + Pixel(r, c) + " traces to " +
                        Pixel(src_r, src_c) + " outside the I-frame");
      }
      const std::size_t src = static_cast<std::size_t>(src_r) * w + src_c;
      for (int k = 0; k < ch; ++k) {
        out.data[dst * ch + k] = static_cast<std::uint8_t>(std::clamp(
            int{iframe.data[src * ch + k]} + state.residual[dst * ch + k], 0, 255));
      }
    }
  }
  return out;
}

}  // namespace cvfield
