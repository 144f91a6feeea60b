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

// Tensor (NPY) and image (PPM/PGM) output of accumulated fields.

#ifndef CVFIELD_EXPORT_H_
#define CVFIELD_EXPORT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cvfield/types.h"

namespace cvfield {

enum class ElementKind { kInt16, kUint8 };

std::size_t ElementSize(ElementKind kind);

// C-order little-endian tensor. An empty shape is a scalar.
struct TensorBlob {
  std::vector<std::size_t> shape;
  ElementKind kind = ElementKind::kUint8;
  std::vector<std::uint8_t> data;

  std::size_t element_count() const;
};

TensorBlob MakeTensor(std::vector<std::size_t> shape,
                      const std::vector<std::int16_t>& values);
TensorBlob MakeTensor(std::vector<std::size_t> shape,
                      const std::vector<std::uint8_t>& values);

// NPY format version 1.0, header padded with spaces to a multiple of 16
// bytes. Throws InvalidArgument if the data length disagrees with the shape.
std::vector<std::uint8_t> WriteNpy(const TensorBlob& tensor);

// HSV rendering of a displacement field: hue is the direction
// atan2(dr, dc) in [0, 360) (0 = rightward, 90 = downward), saturation the
// magnitude over max_mag (or over the field's largest magnitude when
// max_mag is absent), capped at 1, and value 1.
Frame MotionToImage(const DisplacementField& field,
                    std::optional<double> max_mag = std::nullopt);

// Standard HSV to 8-bit RGB, h in degrees, s and v in [0, 1].
std::array<std::uint8_t, 3> HsvToRgb(double h, double s, double v);

// |sample| clamped into [0, 255]; single-channel planes are replicated to
// RGB.
Frame ResidualToImage(const ResidualPlane& residual);

// Binary P6 for 3 channels, P5 for 1.
std::vector<std::uint8_t> WritePpm(const Frame& frame);

}  // namespace cvfield

#endif  // CVFIELD_EXPORT_H_
