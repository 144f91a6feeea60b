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

#include "cvfield/synth.h"

#include <algorithm>
#include <limits>
#include <string>

#include "cvfield/error.h"
#include "json.hpp"

namespace cvfield {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

using OwnerMap = std::vector<std::int32_t>;

OwnerMap Owners(const SceneSpec& spec, int t) {
  OwnerMap owner(static_cast<std::size_t>(spec.height) * spec.width, 0);
  for (std::size_t k = 0; k < spec.objects.size(); ++k) {
    const RectObject& o = spec.objects[k];
    const int top = o.row + t * o.vr;
    const int left = o.col + t * o.vc;
    const int r0 = std::max(top, 0);
    const int r1 = std::min(top + o.height, spec.height);
    const int c0 = std::max(left, 0);
    const int c1 = std::min(left + o.width, spec.width);
    for (int r = r0; r < r1; ++r) {
      for (int c = c0; c < c1; ++c) {
        owner[static_cast<std::size_t>(r) * spec.width + c] =
            static_cast<std::int32_t>(k + 1);
      }
    }
  }
  return owner;
}

// Chebyshev distance from each pixel to the nearest pixel of a different
// owner or to the outside of the frame. One two-pass chamfer transform per
// owner present.
std::vector<std::int32_t> EdgeDistance(const OwnerMap& owner, int h, int w) {
  constexpr std::int32_t kFar = std::numeric_limits<std::int32_t>::max() / 2;
  std::vector<std::int32_t> out(owner.size(), 0);
  std::vector<std::int32_t> present(owner.begin(), owner.end());
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  std::vector<std::int32_t> dist(owner.size());
  auto at = [w](int r, int c) { return static_cast<std::size_t>(r) * w + c; };
  for (std::int32_t o : present) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        dist[at(r, c)] = owner[at(r, c)] == o
                             ? std::min({r + 1, c + 1, h - r, w - c, kFar})
                             : 0;
      }
    }
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        std::int32_t& d = dist[at(r, c)];
        if (c > 0) d = std::min(d, dist[at(r, c - 1)] + 1);
        if (r > 0) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (c + dc >= 0 && c + dc < w) d = std::min(d, dist[at(r - 1, c + dc)] + 1);
          }
        }
      }
    }
    for (int r = h - 1; r >= 0; --r) {
      for (int c = w - 1; c >= 0; --c) {
        std::int32_t& d = dist[at(r, c)];
        if (c + 1 < w) d = std::min(d, dist[at(r, c + 1)] + 1);
        if (r + 1 < h) {
          for (int dc = -1; dc <= 1; ++dc) {
            if (c + dc >= 0 && c + dc < w) d = std::min(d, dist[at(r + 1, c + dc)] + 1);
          }
        }
      }
    }
    for (std::size_t i = 0; i < owner.size(); ++i) {
      if (owner[i] == o) out[i] = dist[i];
    }
  }
  return out;
}

Pattern PatternFromJson(const nlohmann::json& j) {
  Pattern p;
  const std::string kind = j.value("kind", std::string("flat"));
  if (kind == "flat") {
    p.kind = Pattern::Kind::kFlat;
  } else if (kind == "noise") {
    p.kind = Pattern::Kind::kNoise;
  } else if (kind == "gradient") {
    p.kind = Pattern::Kind::kGradient;
  } else if (kind == "checker") {
    p.kind = Pattern::Kind::kChecker;
  } else {
    throw DataError("unknown pattern kind '" + kind + "'");
  }
  if (j.contains("color")) {
    const auto& c = j.at("color");
    if (c.is_number_integer()) {
      p.color.fill(static_cast<std::uint8_t>(std::clamp(c.get<int>(), 0, 255)));
    } else if (c.is_array() && c.size() == 3) {
      for (std::size_t k = 0; k < 3; ++k) {
        p.color[k] = static_cast<std::uint8_t>(std::clamp(c[k].get<int>(), 0, 255));
      }
    } else {
      throw DataError("pattern color must be an integer or a 3-element array");
    }
  }
  p.seed = j.value("seed", std::uint64_t{0});
  p.cell = j.value("cell", 4);
  if (p.cell < 1) throw DataError("checker cell must be >= 1");
  return p;
}

}  // namespace

std::uint8_t Pattern::Sample(int r, int c, int channel, int height,
                             int width) const {
  switch (kind) {
    case Kind::kFlat:
      return color[static_cast<std::size_t>(channel)];
    case Kind::kNoise: {
      const std::uint64_t key =
          seed * 0x100000001B3ull ^
          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(r)) << 34) ^
          (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) << 4) ^
          static_cast<std::uint64_t>(channel);
      return static_cast<std::uint8_t>(SplitMix64(key) >> 56);
    }
    case Kind::kGradient: {
      const int gr = height > 1 ? r * 255 / (height - 1) : 0;
      const int gc = width > 1 ? c * 255 / (width - 1) : 0;
      return static_cast<std::uint8_t>((gr + gc + color[static_cast<std::size_t>(channel)]) / 3);
    }
    case Kind::kChecker: {
      const std::uint8_t base = color[static_cast<std::size_t>(channel)];
      return ((r / cell + c / cell) % 2 == 0) ? base
                                              : static_cast<std::uint8_t>(255 - base);
    }
  }
  return 0;
}

SyntheticVideo SynthScene(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw InvalidArgument("scene dimensions must be positive");
  }
  if (spec.frame_count < 1) throw InvalidArgument("scene needs at least one frame");
  if (spec.channels != 1 && spec.channels != 3) {
    throw InvalidArgument("scene channels must be 1 or 3");
  }
  for (const RectObject& o : spec.objects) {
    if (o.height < 1 || o.width < 1) {
      throw InvalidArgument("object dimensions must be positive");
    }
  }
  const int h = spec.height;
  const int w = spec.width;
  const int ch = spec.channels;
  const int n = spec.frame_count;

  std::vector<OwnerMap> owners;
  std::vector<std::vector<std::int32_t>> edge;
  SyntheticVideo out;
  for (int t = 0; t < n; ++t) {
    owners.push_back(Owners(spec, t));
    edge.push_back(EdgeDistance(owners.back(), h, w));

    Frame f(h, w, ch);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::int32_t o = owners.back()[static_cast<std::size_t>(r) * w + c];
        for (int k = 0; k < ch; ++k) {
          if (o == 0) {
            f.at(r, c, k) = spec.background.Sample(r, c, k, h, w);
          } else {
            const RectObject& obj = spec.objects[static_cast<std::size_t>(o - 1)];
            f.at(r, c, k) = obj.fill.Sample(r - (obj.row + t * obj.vr),
                                            c - (obj.col + t * obj.vc), k,
                                            obj.height, obj.width);
          }
        }
      }
    }
    out.frames.push_back(std::move(f));
  }

  for (int t = 0; t < n; ++t) {
    TruthFrame truth;
    truth.displacement = DisplacementField(h, w);
    truth.valid.assign(static_cast<std::size_t>(h) * w, 0);
    truth.clearance.assign(truth.valid.size(), 0);
    truth.owner = owners[static_cast<std::size_t>(t)];
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::size_t i = static_cast<std::size_t>(r) * w + c;
        const std::int32_t o = truth.owner[i];
        int vr = 0;
        int vc = 0;
        if (o != 0) {
          vr = spec.objects[static_cast<std::size_t>(o - 1)].vr;
          vc = spec.objects[static_cast<std::size_t>(o - 1)].vc;
        }
        truth.displacement.data[i * 2] = static_cast<std::int16_t>(t * vr);
        truth.displacement.data[i * 2 + 1] = static_cast<std::int16_t>(t * vc);

        bool valid = true;
        std::int32_t clearance = std::numeric_limits<std::int32_t>::max();
        for (int s = t; s >= 0 && valid; --s) {
          const int qr = r - (t - s) * vr;
          const int qc = c - (t - s) * vc;
          if (qr < 0 || qr >= h || qc < 0 || qc >= w) {
            valid = false;
            break;
          }
          const std::size_t q = static_cast<std::size_t>(qr) * w + qc;
          if (owners[static_cast<std::size_t>(s)][q] != o) {
            valid = false;
            break;
          }
          clearance = std::min(clearance, edge[static_cast<std::size_t>(s)][q]);
        }
        truth.valid[i] = valid ? 1 : 0;
        truth.clearance[i] = valid ? clearance : 0;
      }
    }
    out.truth.frames.push_back(std::move(truth));
  }
  return out;
}

SceneSpec SceneSpecFromJson(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("scene spec is not valid JSON: ") + e.what());
  }
  try {
    SceneSpec spec;
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    spec.channels = j.value("channels", 3);
    spec.frame_count = j.value("frame_count", 12);
    if (j.contains("background")) spec.background = PatternFromJson(j.at("background"));
    if (j.contains("objects")) {
      for (const auto& o : j.at("objects")) {
        RectObject obj;
        obj.height = o.at("height").get<int>();
        obj.width = o.at("width").get<int>();
        obj.row = o.value("row", 0);
        obj.col = o.value("col", 0);
        obj.vr = o.value("vr", 0);
        obj.vc = o.value("vc", 0);
        if (o.contains("fill")) obj.fill = PatternFromJson(o.at("fill"));
        spec.objects.push_back(obj);
      }
    }
    if (spec.width < 1 || spec.height < 1 || spec.frame_count < 1 ||
        (spec.channels != 1 && spec.channels != 3)) {
      throw DataError("scene spec has invalid dimensions");
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed scene spec: ") + e.what());
  }
}

}  // namespace cvfield
