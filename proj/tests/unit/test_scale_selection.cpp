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

#include <algorithm>
#include <random>

#include <doctest.h>

#include "geospm/scale_selection.hpp"
#include "toy.hpp"

using namespace geospm;
using namespace geospm::scale;

namespace {

BinaryMap run(const SpatialDomain& d, std::size_t lo, std::size_t hi) {
    BinaryMap m(d);
    for (std::size_t v = lo; v <= hi; ++v) m.set(v, true);
    return m;
}

Dataset two_variable(std::initializer_list<std::pair<double, double>> values) {
    Dataset ds;
    ds.domain = SpatialDomain(4, 4);
    ds.variable_names = {"z1", "z2"};
    double x = 0.5;
    for (auto [a, b] : values) {
        ds.observations.push_back({{x, 1.5}, {a, b}});
        x += 1.0;
    }
    return ds;
}

}  // namespace

TEST_SUITE("scale_selection") {

TEST_CASE("spatial conditions") {
    const auto enc = spatial_conditions(two_variable({{0.003, 1.004}, {1.002, 0.0}, {1.0, 1.0}}));
    CHECK(enc.variables == 2);
    CHECK(enc.condition == std::vector<int>{2, 1, 3});
    CHECK(enc.counts == std::vector<std::size_t>{0, 1, 1, 1});
    CHECK(enc.one_hot.variable_names.size() == 4);
    CHECK(enc.one_hot.observations[0].values == std::vector<double>{0, 0, 1, 0});

    Dataset uni;
    uni.domain = SpatialDomain(3, 3);
    uni.variable_names = {"z"};
    uni.observations = {{{0.5, 0.5}, {0.001}}, {{1.5, 0.5}, {0.004}}};
    const auto u = spatial_conditions(uni);
    CHECK(u.condition == std::vector<int>{0, 0});
    std::vector<std::size_t> nonzero;
    for (std::size_t c = 0; c < u.one_hot.variable_names.size(); ++c) {
        bool any = false;
        for (const auto& o : u.one_hot.observations) any = any || o.values[c] != 0.0;
        if (any) nonzero.push_back(c);
    }
    CHECK(nonzero == std::vector<std::size_t>{0});

    const auto sel = spatial_conditions(two_variable({{0.9, 0.1}}), {"z2"});
    CHECK(sel.variables == 1);
    CHECK(sel.condition == std::vector<int>{0});

    Dataset three = uni;
    three.variable_names = {"a", "b", "c"};
    for (auto& o : three.observations) o.values = {0, 0, 0};
    CHECK_THROWS_AS(spatial_conditions(three), std::invalid_argument);
}

TEST_CASE("coverage score") {
    const SpatialDomain d(10, 10);
    std::vector<BinaryMap> disjoint{run(d, 0, 9), run(d, 20, 39)};
    CHECK(coverage_score(disjoint) == 30);
    std::vector<BinaryMap> overlap{run(d, 0, 9), run(d, 4, 19)};
    CHECK(coverage_score(overlap) == 14);
    std::vector<BinaryMap> same{run(d, 3, 30), run(d, 3, 30)};
    CHECK(coverage_score(same) == 0);

    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        std::vector<BinaryMap> maps;
        std::size_t total = 0;
        for (int i = 0; i < 4; ++i) {
            maps.push_back(toy::random_map(d, 0.2, rng));
            total += maps.back().count();
        }
        const auto s = coverage_score(maps);
        CHECK(s <= total);
        std::shuffle(maps.begin(), maps.end(), rng);
        CHECK(coverage_score(maps) == s);
    }
}

TEST_CASE("select scale") {
    CHECK(select_scale({{10, 5}, {20, 9}, {30, 30}, {40, 41}, {50, 12}, {60, 3}}) == 40.0);
    CHECK(select_scale({{30, 7}, {10, 7}, {20, 7}}) == 10.0);
    CHECK(select_scale({{25, 0}}) == 25.0);
    CHECK_THROWS_AS(select_scale({}), std::invalid_argument);
}

TEST_CASE("scoring over a schedule") {
    // Two separated clusters carrying different univariate conditions.
    Dataset ds;
    ds.domain = SpatialDomain(40, 20);
    ds.variable_names = {"z"};
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 2.0);
    for (int i = 0; i < 400; ++i) {
        const bool left = i % 2 == 0;
        const double cx = left ? 10.0 : 30.0;
        const double x = std::clamp(cx + n(rng), 0.01, 39.99), y = std::clamp(10.0 + n(rng), 0.01, 19.99);
        ds.observations.push_back({{x, y}, {left ? 1.001 : 0.002}});
    }
    const auto sel = score_scales(ds, {}, smoothing::SmoothingSchedule({4, 8, 12}));
    REQUIRE(sel.scores.size() == 3);
    CHECK(sel.scores[0].diameter == 4.0);
    CHECK(sel.selected == select_scale(sel.scores));
    CHECK(std::any_of(sel.scores.begin(), sel.scores.end(), [](const ScaleScore& s) { return s.score > 0; }));
}

}
