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

// Score-level evaluation helpers: test-time frame sampling, ten-crop
// geometry, temporal segment averaging, softmax and late fusion.

#ifndef CVFIELD_PROTOCOL_H_
#define CVFIELD_PROTOCOL_H_

#include <cstddef>
#include <string_view>
#include <vector>

namespace cvfield {

using ScoreVector = std::vector<double>;

// Endpoint-anchored uniform sampling: index j is round(j * (n - 1) / (k - 1))
// with halves rounded up; k == 1 gives {0}. Throws InvalidArgument when
// n_frames or k is zero.
std::vector<std::size_t> UniformSampleIndices(std::size_t n_frames,
                                              std::size_t k = 25);

struct CropGeometry {
  int row = 0;
  int col = 0;
  int size = 0;
  bool flip = false;

  bool operator==(const CropGeometry&) const = default;
};

// Top-left, top-right, bottom-left, bottom-right and center crops, first all
// unflipped, then the same five flipped. Throws InvalidArgument when the
// crop does not fit.
std::vector<CropGeometry> CropFlipVariants(int height, int width, int crop = 224);

// Element-wise mean of exactly k vectors of equal length.
ScoreVector SegmentAverage(const std::vector<ScoreVector>& vectors,
                           std::size_t k = 3);

ScoreVector Softmax(const ScoreVector& scores);

// Lowest index among the maxima.
std::size_t Argmax(const ScoreVector& scores);

struct FusionResult {
  ScoreVector fused;
  ScoreVector probabilities;
  std::size_t predicted = 0;
};

// streams[s][f] is the score vector of stream s on frame (or crop) f. Each
// stream is averaged over its frames, the stream averages are summed, and
// softmax is applied to the sum. Throws InvalidArgument on empty input or a
// class-count mismatch.
FusionResult FuseAndPredict(const std::vector<std::vector<ScoreVector>>& streams);

// One row per frame, one comma-separated column per class. Blank lines are
// skipped. Throws DataError on non-numeric cells or ragged rows.
std::vector<ScoreVector> ParseScoreCsv(std::string_view text);

}  // namespace cvfield

#endif  // CVFIELD_PROTOCOL_H_
