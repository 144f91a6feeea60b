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

#include "cvfield/export.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "cvfield/error.h"

namespace cvfield {
namespace {

constexpr std::uint8_t kNpyMagic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kNpyPreamble = 10;  // magic, version, header length

std::string ShapeTuple(const std::vector<std::size_t>& shape) {
  if (shape.empty()) return "()";
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += ", ";
    s += std::to_string(shape[i]);
  }
  if (shape.size() == 1) s += ",";
  return s + ")";
}

std::uint8_t To8(double unit) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0));
}

}  // namespace

std::size_t ElementSize(ElementKind kind) {
  return kind == ElementKind::kInt16 ? 2 : 1;
}

std::size_t TensorBlob::element_count() const {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

namespace {

void CheckCount(const TensorBlob& t, std::size_t count) {
  if (count != t.element_count()) {
    throw InvalidArgument("tensor of " + std::to_string(t.element_count()) +
                          " elements given " + std::to_string(count) + " values");
  }
}

}  // namespace

TensorBlob MakeTensor(std::vector<std::size_t> shape,
                      const std::vector<std::int16_t>& values) {
  TensorBlob t;
  t.shape = std::move(shape);
  t.kind = ElementKind::kInt16;
  CheckCount(t, values.size());
  t.data.reserve(values.size() * 2);
  for (std::int16_t v : values) {
    const auto u = static_cast<std::uint16_t>(v);
    t.data.push_back(static_cast<std::uint8_t>(u & 0xFF));
    t.data.push_back(static_cast<std::uint8_t>(u >> 8));
  }
  return t;
}

TensorBlob MakeTensor(std::vector<std::size_t> shape,
                      const std::vector<std::uint8_t>& values) {
  TensorBlob t;
  t.shape = std::move(shape);
  t.kind = ElementKind::kUint8;
  CheckCount(t, values.size());
  t.data = values;
  return t;
}

std::vector<std::uint8_t> WriteNpy(const TensorBlob& tensor) {
  if (tensor.data.size() != tensor.element_count() * ElementSize(tensor.kind)) {
    throw InvalidArgument("tensor data length does not match its shape");
  }
  std::string header = "{'descr': '";
  header += tensor.kind == ElementKind::kInt16 ? "<i2" : "|u1";
  header += "', 'fortran_order': False, 'shape': " + ShapeTuple(tensor.shape) + ", }";
  // Pad with spaces so that preamble + header + '\n' is 16-byte aligned.
  const std::size_t unpadded = kNpyPreamble + header.size() + 1;
  header.append((16 - unpadded % 16) % 16, ' ');
  header += '\n';

  std::vector<std::uint8_t> out(std::begin(kNpyMagic), std::end(kNpyMagic));
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xFF));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), tensor.data.begin(), tensor.data.end());
  return out;
}

std::array<std::uint8_t, 3> HsvToRgb(double h, double s, double v) {
  h = std::fmod(h, 360.0);
  if (h < 0) h += 360.0;
  const double c = v * s;
  const double x = c * (1.0 - std::fabs(std::fmod(h / 60.0, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h / 60.0)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  return {To8(r + m), To8(g + m), To8(b + m)};
}

Frame MotionToImage(const DisplacementField& field, std::optional<double> max_mag) {
  const std::size_t n = static_cast<std::size_t>(field.height) * field.width;
  double scale = 0.0;
  if (max_mag) {
    scale = *max_mag;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      scale = std::max(scale, std::hypot(static_cast<double>(field.data[i * 2]),
                                         static_cast<double>(field.data[i * 2 + 1])));
    }
  }
  Frame out(field.height, field.width, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = field.data[i * 2];
    const double dc = field.data[i * 2 + 1];
    double hue = std::atan2(dr, dc) * 180.0 / std::numbers::pi;
    if (hue < 0) hue += 360.0;
    if (hue >= 360.0) hue -= 360.0;
    const double sat = scale > 0 ? std::min(1.0, std::hypot(dr, dc) / scale) : 0.0;
    const auto rgb = HsvToRgb(hue, sat, 1.0);
    std::copy(rgb.begin(), rgb.end(), out.data.begin() + static_cast<std::ptrdiff_t>(i * 3));
  }
  return out;
}

Frame ResidualToImage(const ResidualPlane& residual) {
  Frame out(residual.height, residual.width, 3);
  const std::size_t n = static_cast<std::size_t>(residual.height) * residual.width;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) {
      const int src = residual.channels == 1 ? 0 : k;
      const int v = residual.data[i * residual.channels + src];
      out.data[i * 3 + k] = static_cast<std::uint8_t>(std::min(std::abs(v), 255));
    }
  }
  return out;
}

std::vector<std::uint8_t> WritePpm(const Frame& frame) {
  if (frame.channels != 1 && frame.channels != 3) {
    throw InvalidArgument("PPM output needs 1 or 3 channels");
  }
  const std::string header = std::string(frame.channels == 3 ? "P6" : "P5") + "\n" +
                             std::to_string(frame.width) + " " +
                             std::to_string(frame.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), frame.data.begin(), frame.data.end());
  return out;
}

}  // namespace cvfield
