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

#include "cvfield/bitstream.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "cvfield/codec.h"
#include "cvfield/error.h"

namespace cvfield {
namespace {

constexpr std::uint8_t kMagic[4] = {'C', 'V', 'B', '1'};
// Frame sides must stay below 32768 so accumulated displacements fit in 16 bits.
constexpr std::uint32_t kMaxSide = 32767;

void PutLe(std::uint64_t value, int bytes, std::vector<std::uint8_t>& out) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

void PutSigned(int value, std::vector<std::uint8_t>& out) {
  AppendVarint(ZigzagEncode(value), out);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint64_t Le(int n, const char* what) {
    if (remaining() < static_cast<std::size_t>(n)) {
      throw ParseError(std::string("truncated ") + what, bytes_.size());
    }
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    }
    pos_ += n;
    return v;
  }

  std::int64_t Signed() {
    return ZigzagDecode(ReadVarint(bytes_, pos_));
  }

  std::span<const std::uint8_t> Take(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw ParseError(std::string("truncated ") + what, bytes_.size());
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string FramePrefix(std::size_t k) {
  return "frame " + std::to_string(k) + ": ";
}

}  // namespace

void AppendVarint(std::uint64_t value, std::vector<std::uint8_t>& out) {
  while (value >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(value | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(value));
}

std::uint64_t ReadVarint(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  const std::size_t start = pos;
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < kMaxVarintBytes; ++i) {
    if (start + i >= bytes.size()) {
      throw ParseError("truncated varint", bytes.size());
    }
    const std::uint8_t byte = bytes[start + i];
    if (i == kMaxVarintBytes - 1 && byte > 1) {
      throw ParseError("varint overflows 64 bits", start);
    }
    value |= std::uint64_t{byte & 0x7Fu} << (7 * i);
    if ((byte & 0x80) == 0) {
      if (i > 0 && byte == 0) {
        throw ParseError("non-minimal varint", start);
      }
      pos = start + i + 1;
      return value;
    }
  }
  throw ParseError("unterminated varint", start);
}

ContainerHeader MakeHeader(std::span<const EncodedGop> gops) {
  if (gops.empty()) throw InvalidArgument("no GOPs to describe");
  const EncodedGop& first = gops.front();
  const GopConfig& cfg = first.config;
  if (first.iframe.width < 1 || first.iframe.height < 1 ||
      static_cast<std::uint32_t>(first.iframe.width) > kMaxSide ||
      static_cast<std::uint32_t>(first.iframe.height) > kMaxSide) {
    throw InvalidArgument("frame size out of container range");
  }
  if (cfg.block_size < 1 || cfg.block_size > 255 || cfg.search_range < 0 ||
      cfg.search_range > 255 || cfg.gop_length < 1 || cfg.gop_length > 65535) {
    throw InvalidArgument("GOP configuration does not fit the container header");
  }
  std::uint64_t frames = 0;
  for (const EncodedGop& gop : gops) frames += gop.frame_count();
  if (frames > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("too many frames for one container");
  }
  ContainerHeader h;
  h.width = static_cast<std::uint32_t>(first.iframe.width);
  h.height = static_cast<std::uint32_t>(first.iframe.height);
  h.channels = static_cast<std::uint8_t>(first.iframe.channels);
  h.block_size = static_cast<std::uint8_t>(cfg.block_size);
  h.search_range = static_cast<std::uint8_t>(cfg.search_range);
  h.gop_length = static_cast<std::uint16_t>(cfg.gop_length);
  h.frame_count = static_cast<std::uint32_t>(frames);
  return h;
}

std::vector<std::uint8_t> WriteContainer(std::span<const EncodedGop> gops,
                                         const ContainerHeader& header) {
  if (header.channels != 1 && header.channels != 3) {
    throw InvalidArgument("channels must be 1 or 3");
  }
  if (header.block_size < 1 || header.gop_length < 1 || header.frame_count < 1 ||
      header.width < 1 || header.height < 1 || header.width > kMaxSide ||
      header.height > kMaxSide) {
    throw InvalidArgument("invalid container header");
  }
  std::uint64_t frames = 0;
  for (std::size_t g = 0; g < gops.size(); ++g) {
    const EncodedGop& gop = gops[g];
    const Frame& i = gop.iframe;
    const bool last = g + 1 == gops.size();
    if (static_cast<std::uint32_t>(i.width) != header.width ||
        static_cast<std::uint32_t>(i.height) != header.height ||
        i.channels != header.channels ||
        i.data.size() != static_cast<std::size_t>(i.width) * i.height * i.channels) {
      throw InvalidArgument("GOP " + std::to_string(g) +
                            " I-frame does not match the header");
    }
    if (gop.frame_count() > header.gop_length ||
        (!last && gop.frame_count() != header.gop_length)) {
      throw InvalidArgument("GOP " + std::to_string(g) + " has " +
                            std::to_string(gop.frame_count()) +
                            " frames, header gop_length is " +
                            std::to_string(header.gop_length));
    }
    for (const PFrame& p : gop.pframes) {
      const MotionField& m = p.motion;
      const ResidualPlane& res = p.residual;
      if (m.height != i.height || m.width != i.width ||
          m.block_size != header.block_size ||
          m.vectors.size() != static_cast<std::size_t>(m.grid_rows) * m.grid_cols ||
          m.grid_rows != (i.height + m.block_size - 1) / m.block_size ||
          m.grid_cols != (i.width + m.block_size - 1) / m.block_size ||
          res.height != i.height || res.width != i.width ||
          res.channels != i.channels || res.data.size() != i.data.size()) {
        throw InvalidArgument("GOP " + std::to_string(g) +
                              " P-frame does not match the header");
      }
      for (const MotionVector& v : m.vectors) {
        if (std::abs(v.dr) > header.search_range ||
            std::abs(v.dc) > header.search_range) {
          throw InvalidArgument("motion vector exceeds header search_range");
        }
      }
      for (std::int16_t v : res.data) {
        if (v < -255 || v > 255) {
          throw InvalidArgument("residual sample outside [-255, 255]");
        }
      }
      CheckMotionInBounds(m);
    }
    frames += gop.frame_count();
  }
  if (frames != header.frame_count) {
    throw InvalidArgument("header frame_count " +
                          std::to_string(header.frame_count) + " but GOPs hold " +
                          std::to_string(frames) + " frames");
  }

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  PutLe(header.width, 4, out);
  PutLe(header.height, 4, out);
  PutLe(header.channels, 1, out);
  PutLe(header.block_size, 1, out);
  PutLe(header.search_range, 1, out);
  PutLe(header.gop_length, 2, out);
  PutLe(header.frame_count, 4, out);
  for (const EncodedGop& gop : gops) {
    out.push_back(kIFrameTag);
    out.insert(out.end(), gop.iframe.data.begin(), gop.iframe.data.end());
    for (const PFrame& p : gop.pframes) {
      out.push_back(kPFrameTag);
      for (const MotionVector& v : p.motion.vectors) {
        PutSigned(v.dr, out);
        PutSigned(v.dc, out);
      }
      for (std::int16_t s : p.residual.data) PutSigned(s, out);
    }
  }
  return out;
}

Container ParseContainer(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (bytes.size() < kContainerHeaderSize) {
    throw ParseError("truncated header", bytes.size());
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw ParseError("bad magic", 0);
  }
  in.Take(4, "header");

  Container out;
  ContainerHeader& h = out.header;
  h.width = static_cast<std::uint32_t>(in.Le(4, "header"));
  h.height = static_cast<std::uint32_t>(in.Le(4, "header"));
  h.channels = static_cast<std::uint8_t>(in.Le(1, "header"));
  h.block_size = static_cast<std::uint8_t>(in.Le(1, "header"));
  h.search_range = static_cast<std::uint8_t>(in.Le(1, "header"));
  h.gop_length = static_cast<std::uint16_t>(in.Le(2, "header"));
  h.frame_count = static_cast<std::uint32_t>(in.Le(4, "header"));
  if (h.width < 1 || h.width > kMaxSide) throw ParseError("invalid width", 4);
  if (h.height < 1 || h.height > kMaxSide) throw ParseError("invalid height", 8);
  if (h.channels != 1 && h.channels != 3) {
    throw ParseError("channels must be 1 or 3", 12);
  }
  if (h.block_size < 1) throw ParseError("block_size must be >= 1", 13);
  if (h.gop_length < 1) throw ParseError("gop_length must be >= 1", 15);
  if (h.frame_count < 1) throw ParseError("frame_count must be >= 1", 17);
  // Every frame needs at least its type byte.
  if (h.frame_count > in.remaining()) {
    throw ParseError("frame_count " + std::to_string(h.frame_count) +
                         " exceeds the remaining data",
                     17);
  }

  const int width = static_cast<int>(h.width);
  const int height = static_cast<int>(h.height);
  const int channels = h.channels;
  const std::size_t samples = static_cast<std::size_t>(width) * height * channels;
  GopConfig config;
  config.block_size = h.block_size;
  config.search_range = h.search_range;
  config.gop_length = h.gop_length;
  const int range = h.search_range;

  for (std::size_t k = 0; k < h.frame_count; ++k) {
    const std::size_t tag_pos = in.pos();
    const auto tag = static_cast<std::uint8_t>(in.Le(1, "frame type"));
    const std::uint8_t expected = k % h.gop_length == 0 ? kIFrameTag : kPFrameTag;
    if (tag != expected) {
      throw ParseError(FramePrefix(k) + "expected frame type " +
                           std::to_string(expected) + ", found " +
                           std::to_string(tag),
                       tag_pos);
    }
    if (tag == kIFrameTag) {
      const auto raw = in.Take(samples, "I-frame");
      EncodedGop gop;
      gop.config = config;
      gop.iframe = Frame(height, width, channels);
      std::copy(raw.begin(), raw.end(), gop.iframe.data.begin());
      out.gops.push_back(std::move(gop));
      continue;
    }

    PFrame p;
    p.motion = MotionField(height, width, h.block_size);
    // Each varint takes at least one byte.
    const std::size_t min_bytes = p.motion.vectors.size() * 2 + samples;
    if (in.remaining() < min_bytes) {
      throw ParseError(FramePrefix(k) + "truncated P-frame", bytes.size());
    }
    const int bs = h.block_size;
    for (int br = 0; br < p.motion.grid_rows; ++br) {
      for (int bc = 0; bc < p.motion.grid_cols; ++bc) {
        const std::size_t at = in.pos();
        const std::int64_t dr = in.Signed();
        const std::int64_t dc = in.Signed();
        if (dr < -range || dr > range || dc < -range || dc > range) {
          throw ParseError(FramePrefix(k) + "motion vector (" +
                               std::to_string(dr) + ", " + std::to_string(dc) +
                               ") exceeds search range " + std::to_string(range),
                           at);
        }
        const int r0 = br * bs;
        const int c0 = bc * bs;
        const int r1 = std::min(r0 + bs, height);
        const int c1 = std::min(c0 + bs, width);
        if (r0 - dr < 0 || r1 - dr > height || c0 - dc < 0 || c1 - dc > width) {
          throw ParseError(FramePrefix(k) + "motion vector of block (" +
                               std::to_string(br) + ", " + std::to_string(bc) +
                               ") references outside the frame",
                           at);
        }
        p.motion.block(br, bc) = {static_cast<int>(dr), static_cast<int>(dc)};
      }
    }
    p.residual = ResidualPlane(height, width, channels);
    for (std::size_t s = 0; s < samples; ++s) {
      const std::size_t at = in.pos();
      const std::int64_t v = in.Signed();
      if (v < -255 || v > 255) {
        throw ParseError(FramePrefix(k) + "residual " + std::to_string(v) +
                             " outside [-255, 255]",
                         at);
      }
      p.residual.data[s] = static_cast<std::int16_t>(v);
    }
    out.gops.back().pframes.push_back(std::move(p));
  }
  if (in.remaining() != 0) {
    throw ParseError("trailing bytes after last frame", in.pos());
  }
  return out;
}

}  // namespace cvfield
