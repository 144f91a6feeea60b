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

#include <gtest/gtest.h>

#include <random>

#include "cvfield/codec.h"
#include "cvfield/error.h"
#include "support/test_video.h"

namespace cvfield {
namespace {

using testing::RandomFrame;
using testing::RandomVideo;

DisplacementField Uniform(int h, int w, int dr, int dc) {
  DisplacementField d(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      d.data[d.index(r, c)] = static_cast<std::int16_t>(dr);
      d.data[d.index(r, c) + 1] = static_cast<std::int16_t>(dc);
    }
  }
  return d;
}

// Three steps on a 4x4 grid:
//   T1 = (0, 1) except column 0, T2 = (1, 0) except row 0,
//   T3 = (0, 0) except (3, 3) which moves by (1, 1).
//   Delta_s at (r, c) = 100 s + 4 r + c.
struct ThreeStep {
  std::vector<DisplacementField> motion;
  std::vector<ResidualPlane> residual;
};

ThreeStep MakeThreeStep() {
  ThreeStep s;
  DisplacementField t1 = Uniform(4, 4, 0, 1);
  for (int r = 0; r < 4; ++r) t1.data[t1.index(r, 0) + 1] = 0;
  DisplacementField t2 = Uniform(4, 4, 1, 0);
  for (int c = 0; c < 4; ++c) t2.data[t2.index(0, c)] = 0;
  DisplacementField t3 = Uniform(4, 4, 0, 0);
  t3.data[t3.index(3, 3)] = 1;
  t3.data[t3.index(3, 3) + 1] = 1;
  s.motion = {t1, t2, t3};
  for (int step = 1; step <= 3; ++step) {
    ResidualPlane p(4, 4, 1);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) p.data[r * 4 + c] = static_cast<std::int16_t>(100 * step + 4 * r + c);
    }
    s.residual.push_back(p);
  }
  return s;
}

TEST(AccumulateStepTest, HandComposedThreeSteps) {
  const ThreeStep s = MakeThreeStep();
  AccumulatorState state(4, 4, 1);
  for (int k = 0; k < 3; ++k) state = AccumulateStep(state, s.motion[k], s.residual[k]);
  EXPECT_EQ(state.frame_index, 3);
  const DisplacementField d = state.displacement_field();
  // (3, 3) -> (2, 2) -> (1, 2) -> (1, 1)
  EXPECT_EQ(d.dr(3, 3), 2);
  EXPECT_EQ(d.dc(3, 3), 2);
  EXPECT_EQ(state.residual[15], (300 + 15) + (200 + 10) + (100 + 6));
  // (0, 0) never moves.
  EXPECT_EQ(d.dr(0, 0), 0);
  EXPECT_EQ(d.dc(0, 0), 0);
  EXPECT_EQ(state.residual[0], 600);
  // (2, 1): T3 0 -> (2, 1), T2 (1, 0) -> (1, 1), T1 (0, 1) -> (1, 0)
  EXPECT_EQ(d.dr(2, 1), 1);
  EXPECT_EQ(d.dc(2, 1), 1);
  EXPECT_EQ(state.residual[9], (300 + 9) + (200 + 9) + (100 + 5));
}

TEST(AccumulateStepTest, ZeroMotionSumsResiduals) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> v(-255, 255);
  AccumulatorState state(5, 6, 3);
  std::vector<int> sum(90, 0);
  for (int step = 0; step < 6; ++step) {
    ResidualPlane p(5, 6, 3);
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      p.data[i] = static_cast<std::int16_t>(v(rng));
      sum[i] += p.data[i];
    }
    state = AccumulateStep(state, Uniform(5, 6, 0, 0), p);
  }
  for (std::size_t i = 0; i < sum.size(); ++i) EXPECT_EQ(state.residual[i], sum[i]);
  for (auto d : state.displacement) EXPECT_EQ(d, 0);
}

TEST(AccumulateStepTest, UniformShiftsAdd) {
  AccumulatorState state(10, 10, 1);
  // Piecewise fields that are zero near the top-left border.
  DisplacementField a(10, 10);
  DisplacementField b(10, 10);
  for (int r = 3; r < 10; ++r) {
    for (int c = 3; c < 10; ++c) {
      a.data[a.index(r, c)] = 1;
      a.data[a.index(r, c) + 1] = 2;
    }
  }
  for (int r = 5; r < 10; ++r) {
    for (int c = 6; c < 10; ++c) {
      b.data[b.index(r, c)] = 2;
      b.data[b.index(r, c) + 1] = 1;
    }
  }
  state = AccumulateStep(state, a, ResidualPlane(10, 10, 1));
  state = AccumulateStep(state, b, ResidualPlane(10, 10, 1));
  const DisplacementField d = state.displacement_field();
  // (9, 9) -> (7, 8) -> (6, 6)
  EXPECT_EQ(d.dr(9, 9), 3);
  EXPECT_EQ(d.dc(9, 9), 3);
  // (5, 6) -> (3, 5) -> (2, 3)
  EXPECT_EQ(d.dr(5, 6), 3);
  EXPECT_EQ(d.dc(5, 6), 3);
  // (5, 5) -> (5, 5) -> (4, 3)
  EXPECT_EQ(d.dr(5, 5), 1);
  EXPECT_EQ(d.dc(5, 5), 2);
}

TEST(AccumulateStepTest, OutOfBoundsPolicy) {
  AccumulatorState state(3, 3, 1);
  const DisplacementField bad = Uniform(3, 3, 0, 1);  // column 0 reads -1
  EXPECT_THROW(AccumulateStep(state, bad, ResidualPlane(3, 3, 1)), DataError);
  const AccumulatorState clamped =
      AccumulateStep(state, bad, ResidualPlane(3, 3, 1), OutOfBounds::kClamp);
  EXPECT_EQ(clamped.clamped, 3u);
  const DisplacementField d = clamped.displacement_field();
  for (int r = 0; r < 3; ++r) {
    EXPECT_EQ(d.dc(r, 0), 0);
    EXPECT_EQ(d.dc(r, 1), 1);
    EXPECT_EQ(d.dc(r, 2), 1);
  }
}

TEST(AccumulateStepTest, SizeMismatch) {
  AccumulatorState state(3, 3, 1);
  EXPECT_THROW(AccumulateStep(state, Uniform(3, 4, 0, 0), ResidualPlane(3, 3, 1)),
               InvalidArgument);
  EXPECT_THROW(AccumulateStep(state, Uniform(3, 3, 0, 0), ResidualPlane(3, 3, 3)),
               InvalidArgument);
}

TEST(AccumulateGopTest, IFrameStateIsZero) {
  std::mt19937_64 rng(2);
  EncodedGop gop;
  gop.iframe = RandomFrame(rng, 7, 9, 3);
  const auto states = AccumulateGop(gop);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_TRUE(states[0].SameFields(AccumulatorState(7, 9, 3)));
  EXPECT_EQ(ReconstructDecoupled(gop.iframe, states[0]), gop.iframe);
}

TEST(BacktraceComposeTest, HandBuiltGop) {
  // Block size 1 turns the hand field into a block field.
  const ThreeStep s = MakeThreeStep();
  EncodedGop gop;
  gop.config.block_size = 1;
  gop.iframe = Frame(4, 4, 1);
  for (int k = 0; k < 3; ++k) {
    MotionField m(4, 4, 1);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m.block(r, c) = {s.motion[k].dr(r, c), s.motion[k].dc(r, c)};
    }
    gop.pframes.push_back({m, s.residual[k]});
  }
  const BacktraceResult b = BacktraceCompose(gop, 3);
  EXPECT_EQ(b.traced.row(3, 3), 1);
  EXPECT_EQ(b.traced.col(3, 3), 1);
  EXPECT_EQ(b.traced.row(2, 1), 1);
  EXPECT_EQ(b.traced.col(2, 1), 0);
  EXPECT_TRUE(b.state.SameFields(AccumulateGop(gop)[3]));
  EXPECT_THROW(BacktraceCompose(gop, 4), InvalidArgument);
  EXPECT_THROW(BacktraceCompose(gop, -1), InvalidArgument);
}

// Feed-forward accumulation agrees with the per-pixel backtrace oracle and
// the decoupled reconstruction equals the decoded frame.
TEST(AccumulatePropertyTest, MatchesBacktraceAndDecoder) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    GopConfig cfg;
    cfg.block_size = std::vector<int>{4, 8, 16}[trial % 3];
    const std::vector<Frame> frames = RandomVideo(rng, 48, 12, 4);
    const EncodedGop gop = EncodeGop(frames, cfg);
    const auto states = AccumulateGop(gop);
    ASSERT_EQ(states.size(), frames.size());
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const BacktraceResult oracle = BacktraceCompose(gop, static_cast<int>(t));
      ASSERT_TRUE(states[t].SameFields(oracle.state)) << "trial " << trial << " t " << t;
      ASSERT_EQ(ReconstructDecoupled(gop.iframe, states[t]), frames[t]);
      const DisplacementField d = states[t].displacement_field();
      for (int r = 0; r < d.height; ++r) {
        for (int c = 0; c < d.width; ++c) {
          ASSERT_EQ(oracle.traced.row(r, c), r - d.dr(r, c));
          ASSERT_EQ(oracle.traced.col(r, c), c - d.dc(r, c));
        }
      }
    }
  }
}

TEST(ReconstructDecoupledTest, Errors) {
  AccumulatorState state(2, 2, 1);
  EXPECT_THROW(ReconstructDecoupled(Frame(2, 3, 1), state), InvalidArgument);
  state.displacement[0] = 1;
  EXPECT_THROW(ReconstructDecoupled(Frame(2, 2, 1), state), DataError);
}

}  // namespace
}  // namespace cvfield
