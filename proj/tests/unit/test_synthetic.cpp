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
#include <set>

#include <doctest.h>

#include "chisq.hpp"
#include "geospm/synthetic.hpp"

using namespace geospm;
using namespace geospm::synthetic;

namespace {

// Four one-cell regions labelled 0..3 so every region gets a quarter of the draws.
RegionPartition four_cells() {
    RegionPartition p;
    p.domain = SpatialDomain(4, 1);
    p.labels = {0, 1, 2, 3};
    p.regions = 4;
    return p;
}

std::vector<std::vector<std::size_t>> outcome_counts(const GeneratedDataset& g, const RegionPartition& part) {
    std::vector<std::vector<std::size_t>> counts(static_cast<std::size_t>(part.regions),
                                                 std::vector<std::size_t>(4, 0));
    for (const auto& s : g.cell_samples) {
        const int label = part.labels[part.domain.offset({s.cell_x + 1, s.cell_y + 1})];
        int o = 0;
        for (std::size_t q = 0; q < s.z.size(); ++q) o |= s.z[q] << q;
        ++counts[static_cast<std::size_t>(label)][static_cast<std::size_t>(o)];
    }
    return counts;
}

}  // namespace

TEST_SUITE("synthetic") {

TEST_CASE("Koch construction") {
    const auto tri = equilateral_triangle({50, 50}, 30, 1.5707963267948966);
    CHECK(tri.signed_area() > 0.0);
    const auto d0 = koch_fractal(tri, 0, KochVariant::snowflake);
    CHECK(d0.edge_count() == 3);
    CHECK(d0.area() == doctest::Approx(tri.area()).epsilon(1e-15));
    CHECK(koch_fractal(tri, 2, KochVariant::snowflake).edge_count() == 48);
    CHECK(koch_fractal(tri, 3, KochVariant::anti_snowflake).edge_count() == 192);
    const double a0 = tri.area();
    CHECK(std::abs(koch_fractal(tri, 1, KochVariant::snowflake).area() / a0 - 4.0 / 3.0) < 1e-12);
    CHECK(std::abs(koch_fractal(tri, 1, KochVariant::anti_snowflake).area() / a0 - 2.0 / 3.0) < 1e-12);
    for (int depth = 0; depth < 5; ++depth) {
        const double p0 = koch_fractal(tri, depth, KochVariant::snowflake).perimeter();
        const double p1 = koch_fractal(tri, depth + 1, KochVariant::snowflake).perimeter();
        CHECK(std::abs(p1 / p0 - 4.0 / 3.0) < 1e-12);
    }
    CHECK_THROWS_AS(koch_fractal(tri, 9, KochVariant::snowflake), LayoutError);
    CHECK_THROWS_AS(koch_fractal(tri, -1, KochVariant::snowflake), LayoutError);
    CHECK(parse_koch_variant(to_string(KochVariant::anti_snowflake)) == KochVariant::anti_snowflake);
}

TEST_CASE("rasterisation") {
    const SpatialDomain d(10, 10);
    SUBCASE("axis-aligned square") {
        const Polygon sq{{{1, 1}, {5, 1}, {5, 5}, {1, 5}}};
        const auto m = rasterize_polygon(sq, d);
        CHECK(m.count() == 16);
        for (int k = 2; k <= 5; ++k)
            for (int j = 2; j <= 5; ++j) CHECK(m.at({j, k}));
    }
    SUBCASE("one-cell translation") {
        const Polygon tri{{{1.3, 1.2}, {7.1, 2.4}, {3.3, 6.6}}};
        const auto m = rasterize_polygon(tri, d);
        const auto t = rasterize_polygon(tri.translated(1.0, 1.0), d);
        CHECK(m.count() > 5);
        for (int k = 1; k < 10; ++k)
            for (int j = 1; j < 10; ++j) CHECK(m.at({j, k}) == t.at({j + 1, k + 1}));
    }
    SUBCASE("degenerate polygon") {
        const Polygon line{{{1, 1}, {5, 5}, {3, 3}}};
        CHECK(rasterize_polygon(line, d).empty());
    }
    SUBCASE("depth-4 snowflake area") {
        const SpatialDomain g(120, 120);
        const auto s = koch_fractal(equilateral_triangle({60, 60}, 45, 1.5707963267948966), 4, KochVariant::snowflake);
        const double ratio = static_cast<double>(rasterize_polygon(s, g).count()) / s.area();
        CHECK(ratio >= 0.98);
        CHECK(ratio <= 1.02);
    }
}

TEST_CASE("partitions") {
    const auto uni = build_partition(default_layout(Layout::univariate_snowflake));
    CHECK(uni.regions == 2);
    const double frac = static_cast<double>(uni.region_size(1)) / static_cast<double>(uni.domain.cell_count());
    CHECK(frac > 0.05);
    CHECK(frac < 0.6);
    CHECK(uni.domain.width() == 120);

    for (auto layout : {Layout::bivariate_snowflake, Layout::bivariate_anti}) {
        const auto bi = build_partition(default_layout(layout));
        CHECK(bi.regions == 4);
        CHECK(std::set<int>(bi.labels.begin(), bi.labels.end()).size() == 4);
        CHECK(bi.domain.width() == 220);
        CHECK(bi.domain.height() == 210);
    }
    CHECK(build_partition(default_layout(Layout::univariate_anti)).regions == 2);
    CHECK(build_partition(default_layout(Layout::snowflake_field)).regions == 2);

    LayoutSpec empty;
    empty.domain = SpatialDomain(20, 20);
    const auto bg = build_partition(empty);
    CHECK(bg.regions == 1);
    CHECK(bg.region_size(0) == 400);

    LayoutSpec outside = default_layout(Layout::univariate_snowflake);
    outside.shapes[0].center = {110, 60};
    CHECK_THROWS_AS(build_partition(outside), LayoutError);
    for (auto l : {Layout::univariate_snowflake, Layout::univariate_anti, Layout::snowflake_field,
                   Layout::bivariate_snowflake, Layout::bivariate_anti})
        CHECK(parse_layout(to_string(l)) == l);
    CHECK_THROWS_AS(parse_layout("hexagon"), LayoutError);
}

TEST_CASE("noise distributions") {
    const auto r1 = noise_distribution(0.0, 1);
    CHECK(r1.probability(1) == 1.0);
    CHECK(r1.probability(0) == 0.0);
    CHECK(r1.probability(2) == 0.0);
    CHECK(r1.probability(3) == 0.0);
    for (int r = 0; r < 4; ++r)
        for (int o = 0; o < 4; ++o) CHECK(noise_distribution(0.5, r).probability(o) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(noise_distribution(0.1, 0).probability(0) == doctest::Approx(0.81).epsilon(1e-15));
    // Table rows: R0 (g, g), R1 (1-g, g), R2 (g, 1-g), R3 (1-g, 1-g).
    const double g = 0.2;
    const double p[4] = {g, 1 - g, g, 1 - g}, q[4] = {g, g, 1 - g, 1 - g};
    for (int r = 0; r < 4; ++r) {
        const auto t = noise_distribution(g, r);
        CHECK(t.probability(0) == doctest::Approx((1 - q[r]) * (1 - p[r])));
        CHECK(t.probability(1) == doctest::Approx((1 - q[r]) * p[r]));
        CHECK(t.probability(2) == doctest::Approx(q[r] * (1 - p[r])));
        CHECK(t.probability(3) == doctest::Approx(q[r] * p[r]));
        CHECK(t.marginal(0) == doctest::Approx(p[r]));
        CHECK(t.marginal(1) == doctest::Approx(q[r]));
    }
    const auto u = noise_distribution(0.3, 1, 1);
    CHECK(u.variables == 1);
    CHECK(u.probability(1) == doctest::Approx(0.7));
    CHECK_THROWS_AS(noise_distribution(0.6, 0), DomainError);
    CHECK_THROWS_AS(noise_distribution(0.1, 4), DomainError);
}

TEST_CASE("interaction distributions") {
    const auto r3 = interaction_parameters(0.5, 3);
    CHECK(r3.c1 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r3.c2 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r3.p3() == doctest::Approx(0.725).epsilon(1e-15));
    const auto null = interaction_parameters(0.0, 3);
    CHECK(null.c1 == doctest::Approx(0.225).epsilon(1e-15));
    CHECK(null.p3() == doctest::Approx(0.475).epsilon(1e-15));
    for (double c3 : {0.0, 0.25, 0.4, 0.5, 0.9})
        for (int r = 0; r < 4; ++r) {
            const auto ip = interaction_parameters(c3, r);
            CHECK(std::abs(4 * ip.p0 + 2 * ip.c1 + 2 * ip.c2 + ip.c3 - 1.0) < 1e-12);
            const auto t = interaction_distribution(c3, r);
            double s = 0.0;
            for (double x : t.probabilities) s += x;
            CHECK(std::abs(s - 1.0) < 1e-12);
            CHECK(t.probability(0) == doctest::Approx(ip.p0));
            CHECK(t.probability(1) == doctest::Approx(ip.p1()));
            CHECK(t.probability(2) == doctest::Approx(ip.p2()));
            CHECK(t.probability(3) == doctest::Approx(ip.p3()));
        }
    for (int o = 0; o < 4; ++o) CHECK(interaction_distribution(0.5, 0).probability(o) == 0.25);
    CHECK_THROWS_AS(interaction_parameters(0.95, 3), DomainError);
    CHECK_THROWS_AS(interaction_parameters(0.5, 4), DomainError);
}

TEST_CASE("sampling invariants") {
    const auto part = build_partition(default_layout(Layout::bivariate_snowflake));
    const auto model = noise_model(0.0, part.regions, 2);
    const auto g = sample_dataset(part, model, 3000, 7);
    CHECK(g.generator == "philox4x32-10");
    CHECK(g.dataset.variable_names == std::vector<std::string>{"z1", "z2"});
    CHECK(validate_dataset(g.dataset).ok());
    for (std::size_t i = 0; i < g.dataset.size(); ++i) {
        const auto& o = g.dataset.observations[i];
        const auto& s = g.cell_samples[i];
        CHECK(std::floor(o.location.x) == s.cell_x);
        CHECK(std::floor(o.location.y) == s.cell_y);
        const int label = part.labels[part.domain.offset({s.cell_x + 1, s.cell_y + 1})];
        for (int q = 0; q < 2; ++q) {
            const double y = o.values[static_cast<std::size_t>(q)];
            const int z = s.z[static_cast<std::size_t>(q)];
            CHECK(y - z >= 0.0);
            CHECK(y - z <= 0.005);
            CHECK((y > 0.5) == (z == 1));
        }
        // With gamma = 0 every region produces only its expected outcome.
        CHECK((s.z[0] | s.z[1] << 1) == label);
    }
    const auto again = sample_dataset(part, model, 3000, 7);
    for (std::size_t i = 0; i < g.dataset.size(); ++i) {
        CHECK(again.dataset.observations[i].location.x == g.dataset.observations[i].location.x);
        CHECK(again.dataset.observations[i].values == g.dataset.observations[i].values);
    }
    const auto other = sample_dataset(part, model, 3000, 8);
    CHECK(other.dataset.observations[0].location.x != g.dataset.observations[0].location.x);
    CHECK_THROWS_AS(sample_dataset(part, model, 0, 1), DomainError);
    CHECK_THROWS_AS(sample_dataset(part, noise_model(0.0, 2, 1), 10, 1), DomainError);
}

TEST_CASE("sampled outcome frequencies") {
    const auto part = four_cells();
    SUBCASE("binomial bound for Pr(0,0) at gamma 0.1") {
        const auto g = sample_dataset(part, noise_model(0.1, 4, 2), 400000, 3);
        const auto counts = outcome_counts(g, part);
        std::size_t n = 0;
        for (auto c : counts[0]) n += c;
        const double p = static_cast<double>(counts[0][0]) / static_cast<double>(n);
        CHECK(std::abs(p - 0.81) <= 3.0 * std::sqrt(0.81 * 0.19 / static_cast<double>(n)));
    }
    SUBCASE("chi-square goodness of fit") {
        std::uint64_t seed = 10;
        for (double gamma : {0.0, 0.1, 0.35}) {
            const auto model = noise_model(gamma, 4, 2);
            const auto counts = outcome_counts(sample_dataset(part, model, 40000, seed++), part);
            for (int r = 0; r < 4; ++r) CHECK(toy::chi_square_p(counts[static_cast<std::size_t>(r)], model.regions[static_cast<std::size_t>(r)].probabilities) > 0.001);
        }
        for (double c3 : {0.25, 0.5}) {
            const auto model = interaction_model(c3);
            const auto counts = outcome_counts(sample_dataset(part, model, 40000, seed++), part);
            for (int r = 0; r < 4; ++r) CHECK(toy::chi_square_p(counts[static_cast<std::size_t>(r)], model.regions[static_cast<std::size_t>(r)].probabilities) > 0.001);
        }
    }
}

TEST_CASE("target maps") {
    const auto part = build_partition(default_layout(Layout::bivariate_snowflake));
    const auto model = noise_model(0.2, 4, 2);
    const auto t1 = target_map(part, model, 0);
    for (std::size_t v = 0; v < t1.size(); ++v) CHECK(t1[v] == (part.labels[v] == 1 || part.labels[v] == 3));
    const auto t2 = target_map(part, model, 1);
    for (std::size_t v = 0; v < t2.size(); ++v) CHECK(t2[v] == (part.labels[v] == 2 || part.labels[v] == 3));
    CHECK(target_map(part, noise_model(0.5, 4, 2), 0).empty());
    CHECK(target_map(part, noise_model(0.5, 4, 2), 1).empty());

    const auto uni = build_partition(default_layout(Layout::univariate_snowflake));
    CHECK(target_map(uni, noise_model(0.1, 2, 1), 0) == uni.region_mask(1));

    const auto inter = product_target_map(part, interaction_model(0.25), {0, 1});
    CHECK(inter == part.region_mask(3));
    CHECK_THROWS_AS(target_map(part, model, 2), DomainError);
}

TEST_CASE("empirical stand-in") {
    const auto d = make_empirical_standin(2000, 5);
    CHECK(d.variable_names == std::vector<std::string>{"diabetes", "sex", "age", "bmi", "income"});
    CHECK(d.domain.cell_size() == 250.0);
    CHECK(validate_dataset(d).ok());
    for (const auto& o : d.observations) {
        CHECK(std::fmod(o.location.x, 1000.0) == 0.0);
        CHECK((o.values[0] == 0.0 || o.values[0] == 1.0));
    }
    const auto again = make_empirical_standin(2000, 5);
    CHECK(again.observations[17].values == d.observations[17].values);
}

}
