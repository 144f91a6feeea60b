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

// Synthetic scenes of translating rectangles with known motion.

#ifndef CVFIELD_SYNTH_H_
#define CVFIELD_SYNTH_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cvfield/types.h"

namespace cvfield {

// Fill of the background or of an object, evaluated in the owner's local
// coordinates so textures travel with their object.
struct Pattern {
  enum class Kind { kFlat, kNoise, kGradient, kChecker };

  Kind kind = Kind::kFlat;
  std::array<std::uint8_t, 3> color = {128, 128, 128};
  std::uint64_t seed = 0;
  // Checker cell side.
  int cell = 4;

  // Sample at local (r, c) of a region of size height x width.
  std::uint8_t Sample(int r, int c, int channel, int height, int width) const;
};

struct RectObject {
  int height = 8;
  int width = 8;
  // Top-left corner at frame 0; may lie outside the frame.
  int row = 0;
  int col = 0;
  // Per-frame displacement.
  int vr = 0;
  int vc = 0;
  Pattern fill;
};

struct SceneSpec {
  int width = 64;
  int height = 64;
  int channels = 3;
  int frame_count = 12;
  Pattern background;
  // Painted in order, later objects over earlier ones.
  std::vector<RectObject> objects;
};

// Truth for one frame t.
struct TruthFrame {
  // Displacement of every pixel since frame 0: t * velocity of its owner,
  // (0, 0) on the background.
  DisplacementField displacement;
  // 1 where the pixel's trace back to frame 0 stays inside the frame and is
  // owned by the same object (or background) at every frame.
  std::vector<std::uint8_t> valid;
  // Owner per pixel: 0 for background, k + 1 for objects[k].
  std::vector<std::int32_t> owner;
  // For valid pixels, the smallest Chebyshev distance from the traced
  // location to a differently owned pixel or to the outside of the frame,
  // taken over frames 0..t. 0 for invalid pixels.
  std::vector<std::int32_t> clearance;
};

struct GroundTruthMotion {
  std::vector<TruthFrame> frames;
};

struct SyntheticVideo {
  std::vector<Frame> frames;
  GroundTruthMotion truth;
};

// Deterministic rendering. Throws InvalidArgument on zero or negative
// dimensions, a frame count below 1 or channels other than 1 and 3.
SyntheticVideo SynthScene(const SceneSpec& spec);

// Parses a JSON scene description:
//
//   {"width": 64, "height": 48, "channels": 3, "frame_count": 12,
//    "background": {"kind": "noise", "seed": 7},
//    "objects": [{"height": 16, "width": 16, "row": 8, "col": 8,
//                 "vr": 1, "vc": 2,
//                 "fill": {"kind": "flat", "color": [255, 0, 0]}}]}
//
// Pattern kinds are "flat", "noise", "gradient" and "checker" (with "cell").
// Throws DataError on malformed input.
SceneSpec SceneSpecFromJson(std::string_view json);

}  // namespace cvfield

#endif  // CVFIELD_SYNTH_H_
