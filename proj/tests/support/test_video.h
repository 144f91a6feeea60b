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

// Randomized video generators shared by the unit and acceptance suites.

#ifndef CVFIELD_TESTS_SUPPORT_TEST_VIDEO_H_
#define CVFIELD_TESTS_SUPPORT_TEST_VIDEO_H_

#include <algorithm>
#include <random>
#include <vector>

#include "cvfield/synth.h"
#include "cvfield/types.h"

namespace cvfield::testing {

inline Frame RandomFrame(std::mt19937_64& rng, int h, int w, int ch) {
  Frame f(h, w, ch);
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& v : f.data) v = static_cast<std::uint8_t>(byte(rng));
  return f;
}

inline Pattern RandomPattern(std::mt19937_64& rng) {
  Pattern p;
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> byte(0, 255);
  p.kind = static_cast<Pattern::Kind>(kind(rng));
  for (auto& c : p.color) c = static_cast<std::uint8_t>(byte(rng));
  p.seed = rng();
  p.cell = std::uniform_int_distribution<int>(1, 6)(rng);
  return p;
}

// A scene of up to four rectangles moving with velocities up to
// `max_speed`, objects may leave or enter the frame.
inline SceneSpec RandomScene(std::mt19937_64& rng, int max_side, int channels,
                             int frames, int max_speed) {
  std::uniform_int_distribution<int> side(4, max_side);
  SceneSpec spec;
  spec.height = side(rng);
  spec.width = side(rng);
  spec.channels = channels;
  spec.frame_count = frames;
  spec.background = RandomPattern(rng);
  const int n = std::uniform_int_distribution<int>(0, 4)(rng);
  std::uniform_int_distribution<int> speed(-max_speed, max_speed);
  for (int k = 0; k < n; ++k) {
    RectObject o;
    o.height = std::uniform_int_distribution<int>(2, std::max(2, spec.height / 2))(rng);
    o.width = std::uniform_int_distribution<int>(2, std::max(2, spec.width / 2))(rng);
    o.row = std::uniform_int_distribution<int>(-o.height / 2, spec.height - 1)(rng);
    o.col = std::uniform_int_distribution<int>(-o.width / 2, spec.width - 1)(rng);
    o.vr = speed(rng);
    o.vc = speed(rng);
    o.fill = RandomPattern(rng);
    spec.objects.push_back(o);
  }
  return spec;
}

// Mixes three kinds of content so that both structured motion and
// adversarial, motion-free noise reach the codec:
//   0: a random rectangle scene,
//   1: independent noise frames,
//   2: a scene with sparse random perturbations added per frame.
inline std::vector<Frame> RandomVideo(std::mt19937_64& rng, int max_side,
                                      int frames, int max_speed) {
  const int channels = std::uniform_int_distribution<int>(0, 1)(rng) ? 3 : 1;
  const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
  if (kind == 1) {
    const int h = std::uniform_int_distribution<int>(1, max_side)(rng);
    const int w = std::uniform_int_distribution<int>(1, max_side)(rng);
    std::vector<Frame> out;
    for (int t = 0; t < frames; ++t) out.push_back(RandomFrame(rng, h, w, channels));
    return out;
  }
  std::vector<Frame> out =
      SynthScene(RandomScene(rng, max_side, channels, frames, max_speed)).frames;
  if (kind == 2) {
    std::uniform_int_distribution<int> byte(0, 255);
    for (Frame& f : out) {
      std::uniform_int_distribution<std::size_t> pos(0, f.data.size() - 1);
      for (std::size_t k = 0; k < f.data.size() / 16 + 1; ++k) {
        f.data[pos(rng)] = static_cast<std::uint8_t>(byte(rng));
      }
    }
  }
  return out;
}

}  // namespace cvfield::testing

#endif  // CVFIELD_TESTS_SUPPORT_TEST_VIDEO_H_
