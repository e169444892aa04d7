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

#include "geospm/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <png.h>

namespace geospm::render {

Rgb Image::at(int x, int y) const {
    const std::size_t o = 3 * (static_cast<std::size_t>(y) * width + x);
    return {rgb[o], rgb[o + 1], rgb[o + 2]};
}

double shared_abs_scale(std::span<const ScalarField> fields) {
    double m = 0.0;
    for (const auto& f : fields)
        for (double v : f.values())
            if (std::isfinite(v)) m = std::max(m, std::abs(v));
    return m;
}

namespace {

std::uint8_t to_byte(double x) { return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); }

}  // namespace

Rgb diverging_color(double t) {
    t = std::clamp(t, -1.0, 1.0);
    // White at 0, saturating to (0.13, 0.40, 0.67) below and (0.70, 0.09, 0.17) above.
    const double lo[3] = {0.13, 0.40, 0.67}, hi[3] = {0.70, 0.09, 0.17};
    const double* end = t < 0.0 ? lo : hi;
    const double a = std::abs(t);
    return {to_byte(1.0 + a * (end[0] - 1.0)), to_byte(1.0 + a * (end[1] - 1.0)), to_byte(1.0 + a * (end[2] - 1.0))};
}

Rgb sequential_color(double t) {
    const auto v = to_byte(t);
    return {v, v, v};
}

BinaryMap boundary(const BinaryMap& map) {
    const auto& d = map.domain();
    BinaryMap out(d);
    for (int k = 1; k <= d.height(); ++k) {
        for (int j = 1; j <= d.width(); ++j) {
            if (!map.at({j, k})) continue;
            const bool edge = j == 1 || k == 1 || j == d.width() || k == d.height() || !map.at({j - 1, k}) ||
                              !map.at({j + 1, k}) || !map.at({j, k - 1}) || !map.at({j, k + 1});
            if (edge) out.set(CellIndex{j, k}, true);
        }
    }
    return out;
}

Image render_image(const ScalarField& field, const std::vector<BinaryMap>& overlays, const ColormapSpec& spec,
                   std::string* warning) {
    if (spec.pixels_per_cell < 1) throw std::invalid_argument("pixels per cell must be at least 1");
    const auto& d = field.domain();
    for (const auto& o : overlays) require_same_domain(d, o.domain(), "render overlay");

    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (double v : field.values()) {
        if (!std::isfinite(v)) continue;
        lo = any ? std::min(lo, v) : v;
        hi = any ? std::max(hi, v) : v;
        any = true;
    }
    const bool zero_range = !(hi > lo);
    double scale = 0.0;
    if (spec.kind == Colormap::diverging) {
        scale = spec.scale.value_or(std::max(std::abs(lo), std::abs(hi)));
    } else if (spec.scale) {
        lo = 0.0;
        hi = *spec.scale;
    }
    const bool flat = spec.kind == Colormap::diverging ? !(scale > 0.0) : !(hi > lo);
    if (zero_range && warning) *warning = "field has zero range; rendering a flat image";

    std::vector<BinaryMap> outlines;
    for (const auto& o : overlays) outlines.push_back(boundary(o));

    const int ppc = spec.pixels_per_cell;
    Image img;
    img.width = d.width() * ppc;
    img.height = d.height() * ppc;
    img.rgb.assign(3 * static_cast<std::size_t>(img.width) * img.height, 0);
    for (int k = 1; k <= d.height(); ++k) {
        for (int j = 1; j <= d.width(); ++j) {
            const double v = field.at({j, k});
            Rgb c;
            if (!std::isfinite(v)) c = spec.invalid;
            else if (spec.kind == Colormap::diverging) c = diverging_color(flat ? 0.0 : v / scale);
            else c = sequential_color(flat ? 0.5 : (v - lo) / (hi - lo));
            for (const auto& o : outlines)
                if (o.at({j, k})) c = spec.outline;
            for (int py = 0; py < ppc; ++py) {
                const int y = (d.height() - k) * ppc + py;
                for (int px = 0; px < ppc; ++px) {
                    const std::size_t off = 3 * (static_cast<std::size_t>(y) * img.width + (j - 1) * ppc + px);
                    img.rgb[off] = c.r;
                    img.rgb[off + 1] = c.g;
                    img.rgb[off + 2] = c.b;
                }
            }
        }
    }
    return img;
}

namespace {

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void flush_nothing(png_structp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
    std::vector<std::uint8_t> bytes;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG encoding failed");
    }
    png_set_write_fn(png, &bytes, append_bytes, flush_nothing);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
        auto* row = const_cast<png_bytep>(image.rgb.data() + 3 * static_cast<std::size_t>(y) * image.width);
        png_write_row(png, row);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return bytes;
}

Rendered render_png(const ScalarField& field, const std::vector<BinaryMap>& overlays, const ColormapSpec& spec) {
    Rendered r;
    r.image = render_image(field, overlays, spec, &r.warning);
    r.png = encode_png(r.image);
    return r;
}

}  // namespace geospm::render
