/*
 * Copyright 2026 The geospm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geospm/grid_domain.hpp"

namespace geospm::render {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

enum class Colormap { diverging, sequential };

struct ColormapSpec {
    Colormap kind = Colormap::diverging;
    /// Symmetric limit for diverging maps (|v| at full saturation); when unset
    /// the field's own max |value| is used. Sequential maps span [min, max].
    std::optional<double> scale;
    int pixels_per_cell = 1;
    Rgb outline{0, 0, 0};
    Rgb invalid{128, 128, 128};
};

/// Row 0 is the northern edge (k = b).
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;
    Rgb at(int x, int y) const;
};

struct Rendered {
    Image image;
    std::vector<std::uint8_t> png;
    std::string warning;  // set for zero-range fields
};

/// max |value| over finite cells of all fields, for a shared colour scale.
double shared_abs_scale(std::span<const ScalarField> fields);

Rgb diverging_color(double t);   // t in [-1, 1]: blue, white, red
Rgb sequential_color(double t);  // t in [0, 1]: black to white

/// Cells of `map` with a 4-neighbour outside it or on the grid border.
BinaryMap boundary(const BinaryMap& map);

Image render_image(const ScalarField& field, const std::vector<BinaryMap>& overlays, const ColormapSpec& spec,
                   std::string* warning = nullptr);

std::vector<std::uint8_t> encode_png(const Image& image);

Rendered render_png(const ScalarField& field, const std::vector<BinaryMap>& overlays = {},
                    const ColormapSpec& spec = {});

}  // namespace geospm::render
