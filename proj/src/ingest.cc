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

#include "cvfield/ingest.h"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <string>
#include <string_view>

#include "cvfield/error.h"

namespace cvfield {
namespace {

constexpr std::string_view kSignature = "YUV4MPEG2 ";
constexpr std::string_view kFrameMarker = "FRAME";
// Frame sides accepted from a header; keeps size arithmetic far from overflow.
constexpr int kMaxSide = 32767;

// Coefficients scaled by 2^16.
constexpr int kRv = 91881;   // 1.402
constexpr int kGu = 22554;   // 0.344136
constexpr int kGv = 46802;   // 0.714136
constexpr int kBu = 116130;  // 1.772

constexpr int kYr = 19595, kYg = 38470, kYb = 7471;
constexpr int kUr = -11059, kUg = -21709, kUb = 32768;
constexpr int kVr = 32768, kVg = -27439, kVb = -5329;

constexpr int kHalf = 1 << 15;

std::uint8_t Clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

long long FloorDiv(long long a, long long b) {
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

// Rounds value / 2^16 half up. Right shift floors for negative values too.
int RoundFixed(long long value) { return static_cast<int>((value + kHalf) >> 16); }

enum class Chroma { k420, kMono };

struct Y4mHeader {
  int width = 0;
  int height = 0;
  Chroma chroma = Chroma::k420;
};

int ParseDimension(std::string_view token, std::size_t offset) {
  int value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 1 || value > kMaxSide) {
    throw ParseError("invalid dimension '" + std::string(token) + "'", offset);
  }
  return value;
}

// Returns the position one past the terminating newline of the line that
// starts at `pos`.
std::size_t LineEnd(std::span<const std::uint8_t> bytes, std::size_t pos,
                    const char* what) {
  const auto it = std::find(bytes.begin() + pos, bytes.end(), '\n');
  if (it == bytes.end()) {
    throw ParseError(std::string("unterminated ") + what, bytes.size());
  }
  return static_cast<std::size_t>(it - bytes.begin()) + 1;
}

Y4mHeader ParseHeader(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (bytes.size() < kSignature.size() ||
      std::memcmp(bytes.data(), kSignature.data(), kSignature.size()) != 0) {
    throw ParseError("bad YUV4MPEG2 signature", 0);
  }
  const std::size_t end = LineEnd(bytes, 0, "stream header");
  Y4mHeader h;
  bool have_w = false;
  bool have_h = false;
  std::size_t i = kSignature.size();
  while (i < end - 1) {
    if (bytes[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < end - 1 && bytes[j] != ' ') ++j;
    const std::string_view token(reinterpret_cast<const char*>(bytes.data()) + i,
                                 j - i);
    const std::string_view value = token.substr(1);
    switch (token.front()) {
      case 'W':
        h.width = ParseDimension(value, i);
        have_w = true;
        break;
      case 'H':
        h.height = ParseDimension(value, i);
        have_h = true;
        break;
      case 'C':
        if (value == "420" || value == "420jpeg" || value == "420paldv" ||
            value == "420mpeg2") {
          h.chroma = Chroma::k420;
        } else if (value == "mono") {
          h.chroma = Chroma::kMono;
        } else {
          throw ParseError("unsupported colorspace C" + std::string(value), i);
        }
        break;
      default:
        // F, I, A and X carry nothing the frames depend on.
        break;
    }
    i = j;
  }
  if (!have_w || !have_h) {
    throw ParseError("stream header lacks W or H", 0);
  }
  pos = end;
  return h;
}

}  // namespace

std::array<std::uint8_t, 3> YuvToRgb(int y, int u, int v) {
  const long long yy = static_cast<long long>(y) << 16;
  const int du = u - 128;
  const int dv = v - 128;
  return {Clamp8(RoundFixed(yy + static_cast<long long>(kRv) * dv)),
          Clamp8(RoundFixed(yy - static_cast<long long>(kGu) * du -
                            static_cast<long long>(kGv) * dv)),
          Clamp8(RoundFixed(yy + static_cast<long long>(kBu) * du))};
}

std::array<std::uint8_t, 3> RgbToYuv(int r, int g, int b) {
  return {Clamp8(RoundFixed(static_cast<long long>(kYr) * r + kYg * g + kYb * b)),
          Clamp8(128 + RoundFixed(static_cast<long long>(kUr) * r + kUg * g + kUb * b)),
          Clamp8(128 + RoundFixed(static_cast<long long>(kVr) * r + kVg * g + kVb * b))};
}

std::vector<Frame> ReadY4m(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  const Y4mHeader h = ParseHeader(bytes, pos);
  const std::size_t luma = static_cast<std::size_t>(h.width) * h.height;
  const int cw = (h.width + 1) / 2;
  const int ch = (h.height + 1) / 2;
  const std::size_t chroma =
      h.chroma == Chroma::k420 ? static_cast<std::size_t>(cw) * ch : 0;
  const std::size_t frame_bytes = luma + 2 * chroma;

  std::vector<Frame> frames;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kFrameMarker.size() ||
        std::memcmp(bytes.data() + pos, kFrameMarker.data(), kFrameMarker.size()) !=
            0) {
      throw ParseError("expected FRAME", pos);
    }
    pos = LineEnd(bytes, pos, "frame header");
    if (bytes.size() - pos < frame_bytes) {
      throw ParseError("truncated frame " + std::to_string(frames.size()),
                       bytes.size());
    }
    const std::uint8_t* y = bytes.data() + pos;
    if (h.chroma == Chroma::kMono) {
      Frame f(h.height, h.width, 1);
      std::copy_n(y, luma, f.data.begin());
      frames.push_back(std::move(f));
    } else {
      const std::uint8_t* u = y + luma;
      const std::uint8_t* v = u + chroma;
      Frame f(h.height, h.width, 3);
      for (int r = 0; r < h.height; ++r) {
        for (int c = 0; c < h.width; ++c) {
          const std::size_t ci = static_cast<std::size_t>(r / 2) * cw + c / 2;
          const auto rgb = YuvToRgb(y[static_cast<std::size_t>(r) * h.width + c],
                                    u[ci], v[ci]);
          std::copy(rgb.begin(), rgb.end(), &f.data[f.index(r, c)]);
        }
      }
      frames.push_back(std::move(f));
    }
    pos += frame_bytes;
  }
  return frames;
}

std::vector<std::uint8_t> WriteY4m(std::span<const Frame> frames, int fps_num,
                                   int fps_den) {
  if (frames.empty()) throw InvalidArgument("no frames to write");
  const Frame& first = frames.front();
  if (first.channels != 1 && first.channels != 3) {
    throw InvalidArgument("Y4M output needs 1 or 3 channels");
  }
  const bool mono = first.channels == 1;
  std::string header = "YUV4MPEG2 W" + std::to_string(first.width) + " H" +
                       std::to_string(first.height) + " F" +
                       std::to_string(fps_num) + ":" + std::to_string(fps_den) +
                       " Ip A1:1 " + (mono ? "Cmono" : "C420") + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const int w = first.width;
  const int h = first.height;
  const int cw = (w + 1) / 2;
  const int chh = (h + 1) / 2;
  for (const Frame& f : frames) {
    if (f.width != w || f.height != h || f.channels != first.channels) {
      throw InvalidArgument("frames of mixed dimensions");
    }
    out.insert(out.end(), kFrameMarker.begin(), kFrameMarker.end());
    out.push_back('\n');
    if (mono) {
      out.insert(out.end(), f.data.begin(), f.data.end());
      continue;
    }
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        out.push_back(RgbToYuv(f.at(r, c, 0), f.at(r, c, 1), f.at(r, c, 2))[0]);
      }
    }
    std::vector<std::uint8_t> u(static_cast<std::size_t>(cw) * chh);
    std::vector<std::uint8_t> v(u.size());
    for (int br = 0; br < chh; ++br) {
      for (int bc = 0; bc < cw; ++bc) {
        long long sum[3] = {0, 0, 0};
        int n = 0;
        for (int r = 2 * br; r < std::min(2 * br + 2, h); ++r) {
          for (int c = 2 * bc; c < std::min(2 * bc + 2, w); ++c) {
            for (int k = 0; k < 3; ++k) sum[k] += f.at(r, c, k);
            ++n;
          }
        }
        const long long cu = kUr * sum[0] + kUg * sum[1] + kUb * sum[2];
        const long long cv = kVr * sum[0] + kVg * sum[1] + kVb * sum[2];
        const std::size_t i = static_cast<std::size_t>(br) * cw + bc;
        // Mean over the block's n pixels, rounded half up.
        auto mean = [n](long long sum_fixed) {
          const long long d = 65536LL * n;
          return static_cast<int>(FloorDiv(2 * sum_fixed + d, 2 * d));
        };
        u[i] = Clamp8(128 + mean(cu));
        v[i] = Clamp8(128 + mean(cv));
      }
    }
    out.insert(out.end(), u.begin(), u.end());
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::vector<Frame> ReadRawFrames(std::span<const std::uint8_t> bytes, int width,
                                 int height, int channels) {
  if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
    throw InvalidArgument("invalid raw frame geometry");
  }
  const std::size_t frame_bytes =
      static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() % frame_bytes != 0) {
    throw DataError("raw input of " + std::to_string(bytes.size()) +
                    " bytes is not a multiple of the " +
                    std::to_string(frame_bytes) + "-byte frame size");
  }
  std::vector<Frame> frames;
  for (std::size_t pos = 0; pos < bytes.size(); pos += frame_bytes) {
    Frame f(height, width, channels);
    std::copy_n(bytes.data() + pos, frame_bytes, f.data.begin());
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<std::uint8_t> WriteRawFrames(std::span<const Frame> frames) {
  std::vector<std::uint8_t> out;
  for (const Frame& f : frames) out.insert(out.end(), f.data.begin(), f.data.end());
  return out;
}

}  // namespace cvfield
