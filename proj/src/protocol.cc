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

#include "cvfield/protocol.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "cvfield/error.h"

namespace cvfield {

std::vector<std::size_t> UniformSampleIndices(std::size_t n_frames,
                                              std::size_t k) {
  if (n_frames == 0) throw InvalidArgument("cannot sample from zero frames");
  if (k == 0) throw InvalidArgument("sample count must be >= 1");
  if (k == 1) return {0};
  std::vector<std::size_t> out(k);
  const std::size_t span = n_frames - 1;
  const std::size_t den = k - 1;
  for (std::size_t j = 0; j < k; ++j) {
    // floor(j * span / den + 1/2), exact in integers.
    out[j] = (2 * j * span + den) / (2 * den);
  }
  return out;
}

std::vector<CropGeometry> CropFlipVariants(int height, int width, int crop) {
  if (crop < 1 || crop > height || crop > width) {
    throw InvalidArgument("crop " + std::to_string(crop) + " does not fit " +
                          std::to_string(height) + "x" + std::to_string(width));
  }
  const int bottom = height - crop;
  const int right = width - crop;
  const int origins[5][2] = {
      {0, 0}, {0, right}, {bottom, 0}, {bottom, right}, {bottom / 2, right / 2}};
  std::vector<CropGeometry> out;
  for (bool flip : {false, true}) {
    for (const auto& o : origins) out.push_back({o[0], o[1], crop, flip});
  }
  return out;
}

ScoreVector SegmentAverage(const std::vector<ScoreVector>& vectors, std::size_t k) {
  if (k == 0 || vectors.size() != k) {
    throw InvalidArgument("expected " + std::to_string(k) + " segment vectors, got " +
                          std::to_string(vectors.size()));
  }
  ScoreVector out(vectors.front().size(), 0.0);
  for (const ScoreVector& v : vectors) {
    if (v.size() != out.size()) throw InvalidArgument("segment class counts differ");
    for (std::size_t c = 0; c < v.size(); ++c) out[c] += v[c];
  }
  for (double& x : out) x /= static_cast<double>(k);
  return out;
}

ScoreVector Softmax(const ScoreVector& scores) {
  if (scores.empty()) return {};
  const double peak = *std::max_element(scores.begin(), scores.end());
  ScoreVector out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - peak);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

std::size_t Argmax(const ScoreVector& scores) {
  if (scores.empty()) throw InvalidArgument("argmax of an empty vector");
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) -
                                  scores.begin());
}

FusionResult FuseAndPredict(const std::vector<std::vector<ScoreVector>>& streams) {
  if (streams.empty()) throw InvalidArgument("no score streams");
  std::size_t classes = 0;
  for (const auto& stream : streams) {
    if (stream.empty()) throw InvalidArgument("score stream without frames");
    for (const ScoreVector& v : stream) {
      if (classes == 0) classes = v.size();
      if (v.empty() || v.size() != classes) {
        throw InvalidArgument("score vectors disagree on the class count");
      }
    }
  }
  FusionResult out;
  out.fused.assign(classes, 0.0);
  for (const auto& stream : streams) {
    ScoreVector mean(classes, 0.0);
    for (const ScoreVector& v : stream) {
      for (std::size_t c = 0; c < classes; ++c) mean[c] += v[c];
    }
    for (std::size_t c = 0; c < classes; ++c) {
      out.fused[c] += mean[c] / static_cast<double>(stream.size());
    }
  }
  out.predicted = Argmax(out.fused);
  out.probabilities = Softmax(out.fused);
  return out;
}

std::vector<ScoreVector> ParseScoreCsv(std::string_view text) {
  std::vector<ScoreVector> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    ScoreVector row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string_view cell = line.substr(start, comma - start);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
        cell.remove_prefix(1);
      }
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) {
        cell.remove_suffix(1);
      }
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(value)) {
        throw DataError("line " + std::to_string(line_no) + ": bad score '" +
                        std::string(cell) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cvfield
