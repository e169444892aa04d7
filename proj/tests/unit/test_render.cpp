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

#include <cmath>

#include <doctest.h>

#include "geospm/render.hpp"

using namespace geospm;
using namespace geospm::render;

TEST_SUITE("render") {

TEST_CASE("colormaps") {
    CHECK(diverging_color(0.0) == Rgb{255, 255, 255});
    CHECK(diverging_color(1.0).r > diverging_color(1.0).b);
    CHECK(diverging_color(-1.0).b > diverging_color(-1.0).r);
    CHECK(sequential_color(0.0) == Rgb{0, 0, 0});
    CHECK(sequential_color(1.0) == Rgb{255, 255, 255});
}

TEST_CASE("constant field renders flat with a warning") {
    const SpatialDomain d(5, 4);
    std::string warning;
    const auto img = render_image(ScalarField(d, 3.0), {}, ColormapSpec{}, &warning);
    CHECK(!warning.empty());
    CHECK(img.width == 5);
    CHECK(img.height == 4);
    const Rgb first = img.at(0, 0);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) CHECK(img.at(x, y) == first);
}

TEST_CASE("outline overlay and orientation") {
    const SpatialDomain d(7, 7);
    BinaryMap blob(d);
    for (int k = 2; k <= 6; ++k)
        for (int j = 2; j <= 6; ++j) blob.set({j, k}, true);
    const auto edge = boundary(blob);
    CHECK(edge.count() == 16);
    CHECK(!edge.at({4, 4}));
    CHECK(edge.at({2, 4}));
    CHECK(boundary(BinaryMap(d, true)).count() == 24);

    ScalarField f(d, 0.0);
    f.at({1, 7}) = 1.0;  // north-west corner
    ColormapSpec spec;
    spec.pixels_per_cell = 3;
    spec.outline = {0, 255, 0};
    const auto img = render_image(f, {blob}, spec);
    CHECK(img.width == 21);
    CHECK(img.at(1, 1) == diverging_color(1.0));
    CHECK(img.at(4 * 3 + 1, 4 * 3 + 1) == Rgb{255, 255, 255});
    CHECK(img.at(1 * 3 + 1, 3 * 3 + 1) == spec.outline);
    CHECK(img.at(0, 20) == Rgb{255, 255, 255});
    CHECK_THROWS_AS(render_image(f, {BinaryMap(SpatialDomain(3, 3))}, spec), DomainError);
}

TEST_CASE("shared scale") {
    const SpatialDomain d(2, 1);
    std::vector<ScalarField> fields{ScalarField(d, std::vector<double>{1.0, -0.5}),
                                    ScalarField(d, std::vector<double>{-4.0, std::nan("")})};
    CHECK(shared_abs_scale(fields) == 4.0);
    ColormapSpec spec;
    spec.scale = 4.0;
    const auto a = render_image(fields[0], {}, spec);
    CHECK(a.at(0, 0) == diverging_color(0.25));
    CHECK(render_image(fields[1], {}, spec).at(1, 0) == spec.invalid);
}

TEST_CASE("PNG encoding") {
    const auto r = render_png(ScalarField(SpatialDomain(3, 2), std::vector<double>{0, 1, 2, 3, 4, 5}));
    REQUIRE(r.png.size() > 8);
    const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    for (int i = 0; i < 8; ++i) CHECK(r.png[static_cast<std::size_t>(i)] == sig[i]);
    CHECK(r.warning.empty());
}

}
