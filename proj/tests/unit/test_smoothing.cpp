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
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "geospm/kernels.hpp"
#include "geospm/smoothing.hpp"
#include "oracles.hpp"
#include "toy.hpp"

using namespace geospm;
using namespace geospm::smoothing;

namespace {

// Radial mass of an isotropic bivariate normal inside radius r.
double radial_mass(double r, double sigma) { return 1.0 - std::exp(-r * r / (2.0 * sigma * sigma)); }

// Invert radial_mass(d / 2, sigma) = 0.95 by bisection.
double numeric_sigma(double d) {
    double lo = 1e-9, hi = d;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (radial_mass(d / 2.0, mid) > 0.95 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Dataset constant_design_data(const SpatialDomain& d, std::vector<Point2> pts) {
    Dataset ds;
    ds.domain = d;
    ds.variable_names = {"v"};
    for (auto p : pts) ds.observations.push_back({p, {1.0}});
    return ds;
}

}  // namespace

TEST_SUITE("smoothing") {

TEST_CASE("diameter to sigma") {
    CHECK(sigma_from_diameter(60.0) == doctest::Approx(12.2562).epsilon(1e-5));
    CHECK(sigma_from_diameter(60.0) == doctest::Approx(numeric_sigma(60.0)).epsilon(1e-10));
    CHECK(sigma_from_diameter(7000.0) == doctest::Approx(1429.89).epsilon(1e-5));
    CHECK(sigma_from_diameter(7000.0) == doctest::Approx(numeric_sigma(7000.0)).epsilon(1e-10));
    CHECK(sigma_from_diameter(2.0 * std::sqrt(2.0 * std::log(20.0))) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(radial_mass(30.0, sigma_from_diameter(60.0)) == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(diameter_from_sigma(sigma_from_diameter(42.0)) == doctest::Approx(42.0));
    CHECK_THROWS_AS(sigma_from_diameter(0.0), DomainError);
    CHECK_THROWS_AS(sigma_from_diameter(-1.0), DomainError);
}

TEST_CASE("kernel spec and schedule validation") {
    CHECK_THROWS_AS(KernelSpec(1.0, 2.9), DomainError);
    CHECK_NOTHROW(KernelSpec(1.0, 3.0));
    const auto s = SmoothingSchedule::parse("10:60:5");
    CHECK(s.size() == 11);
    CHECK(s[0] == 10.0);
    CHECK(s[10] == 60.0);
    CHECK(SmoothingSchedule::parse("7000").size() == 1);
    CHECK(SmoothingSchedule::synthetic_default().diameters() == s.diameters());
    CHECK_THROWS_AS(SmoothingSchedule::parse("10:5:1"), DomainError);
    CHECK_THROWS_AS(SmoothingSchedule::parse("10:x:1"), DomainError);
    CHECK_THROWS_AS(SmoothingSchedule::parse("1:2"), DomainError);
    CHECK_THROWS_AS(SmoothingSchedule({10.0, 10.0}), DomainError);
    CHECK_THROWS_AS(SmoothingSchedule({-1.0}), DomainError);
}

TEST_CASE("render_kernel normalisation, peak and coincidence") {
    const SpatialDomain d(80, 80);
    const auto k = KernelSpec::from_diameter(20.0);
    const Point2 p{40.3, 39.6};
    const auto f = render_kernel(p, k, d);
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    // Truncation at 4 sigma drops exp(-8) of the radial mass.
    CHECK(std::abs(sum - (1.0 - std::exp(-8.0))) < 1e-4);
    CHECK(1.0 - sum < 3.4e-4);
    const auto own = f.at(world_to_cell(d, p));
    CHECK(own == f.max());
    // Beyond the truncation radius the kernel vanishes.
    CHECK(f.at({1, 1}) == 0.0);

    const SpatialDomain g(20, 20);
    const auto a = render_kernel(congruent_location(g, {5.2, 7.9}), KernelSpec::from_diameter(6.0), g);
    const auto b = render_kernel(congruent_location(g, {5.9, 7.1}), KernelSpec::from_diameter(6.0), g);
    CHECK(a.values() == b.values());
}

TEST_CASE("accumulate_responses examples") {
    const SpatialDomain d(5, 5);
    const SmoothingSchedule sched({3.0});
    SUBCASE("single observation with the constant design equals its kernel") {
        const auto kernel = KernelSpec::from_diameter(3.0);
        const std::vector<Point2> pts{{2.2, 3.1}};
        const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(1, 1);
        const kernels::AccumulateLayout layout{1, false};
        std::vector<double> out(d.cell_count() * layout.stride(), 0.0);
        kernels::accumulate_serial(d, {pts, &x, kernel.sigma, kernel.truncation_radius, 1.0}, layout, out);
        const auto ref = render_kernel(pts[0], kernel, d);
        for (std::size_t v = 0; v < d.cell_count(); ++v)
            CHECK(out[v * layout.stride()] == doctest::Approx(ref[v]).epsilon(1e-14));
    }
    SUBCASE("zero column accumulates to zero") {
        const auto kernel = KernelSpec::from_diameter(3.0);
        const auto ds = toy::random_dataset(d, 6, 1, 5);
        const auto pts = toy::locations(ds);
        Eigen::MatrixXd x = Eigen::MatrixXd::Ones(6, 2);
        x.col(1).setZero();
        const kernels::AccumulateLayout layout{2, false};
        std::vector<double> out(d.cell_count() * layout.stride(), 0.0);
        kernels::accumulate_serial(d, {pts, &x, kernel.sigma, kernel.truncation_radius, 1.0}, layout, out);
        double mass = 0.0;
        for (std::size_t v = 0; v < d.cell_count(); ++v) {
            CHECK(out[v * layout.stride() + 1] == 0.0);
            mass += out[v * layout.stride()];
        }
        CHECK(mass > 0.0);
    }
    SUBCASE("N = 3 matches the brute-force sum of rendered kernels") {
        const auto ds = toy::random_dataset(d, 3, 1, 9);
        const auto design = glm::DesignMatrix::from_dataset(ds, {"v1"});
        const auto acc = accumulate_responses(ds, design, sched, {.parallel = false});
        const double sigma = oracle::sigma_for_diameter(3.0);
        const auto y = oracle::materialise_responses(toy::locations(ds), d, sigma, 4.0 * sigma);
        for (std::size_t v = 0; v < d.cell_count(); ++v) {
            double w = 0.0, s = 0.0, sq = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double k = y(i, static_cast<Eigen::Index>(v));
                w += ds.observations[static_cast<std::size_t>(i)].values[0] * k;
                s += k;
                sq += k * k;
            }
            CHECK(acc.scales[0].weighted[1][v] == doctest::Approx(w).epsilon(1e-13));
            CHECK(acc.scales[0].density[v] == doctest::Approx(s).epsilon(1e-13));
            CHECK(acc.scales[0].sum_squares[v] == doctest::Approx(sq).epsilon(1e-13));
        }
    }
}

TEST_CASE("accumulation properties") {
    const SpatialDomain d(30, 24);
    auto ds = toy::random_dataset(d, 200, 2, 3);
    const auto design = glm::DesignMatrix::from_dataset(ds, {"v1", "v2"});
    const SmoothingSchedule sched({6.0, 12.0});
    const auto acc = accumulate_responses(ds, design, sched, {.lag_products = true, .parallel = false});

    SUBCASE("sum of squares bound") {
        const double sigma = oracle::sigma_for_diameter(6.0);
        const auto y = oracle::materialise_responses(toy::locations(ds), d, sigma, 4.0 * sigma);
        for (std::size_t v = 0; v < d.cell_count(); ++v) {
            const double kmax = y.col(static_cast<Eigen::Index>(v)).maxCoeff();
            CHECK(acc.scales[0].sum_squares[v] <= kmax * acc.scales[0].density[v] * (1.0 + 1e-12));
            CHECK(acc.scales[0].density[v] >= 0.0);
        }
    }
    SUBCASE("permutation invariance") {
        Dataset shuffled = ds;
        std::mt19937_64 rng(4);
        std::shuffle(shuffled.observations.begin(), shuffled.observations.end(), rng);
        const auto d2 = glm::DesignMatrix::from_dataset(shuffled, {"v1", "v2"});
        const auto acc2 = accumulate_responses(shuffled, d2, sched, {.lag_products = true, .parallel = false});
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t v = 0; v < d.cell_count(); ++v) {
                const double scale = acc.scales[s].density.max();
                CHECK(std::abs(acc2.scales[s].density[v] - acc.scales[s].density[v]) <= 1e-12 * scale);
                for (std::size_t c = 0; c < 3; ++c)
                    CHECK(std::abs(acc2.scales[s].weighted[c][v] - acc.scales[s].weighted[c][v]) <= 1e-12 * scale * 10);
            }
    }
    SUBCASE("amplitude scales every statistic") {
        const auto acc3 = accumulate_responses(ds, design, sched, {.amplitude = 2.0, .parallel = false});
        for (std::size_t v = 0; v < d.cell_count(); ++v) {
            CHECK(acc3.scales[1].density[v] == doctest::Approx(2.0 * acc.scales[1].density[v]).epsilon(1e-14));
            CHECK(acc3.scales[1].sum_squares[v] == doctest::Approx(4.0 * acc.scales[1].sum_squares[v]).epsilon(1e-14));
        }
    }
    SUBCASE("lag products match materialised neighbours") {
        const double sigma = oracle::sigma_for_diameter(12.0);
        const auto y = oracle::materialise_responses(toy::locations(ds), d, sigma, 4.0 * sigma);
        for (int k = 1; k <= d.height(); ++k)
            for (int j = 1; j <= d.width(); ++j) {
                const auto v = static_cast<Eigen::Index>(d.offset({j, k}));
                double lx = 0.0, ly = 0.0;
                if (j < d.width()) lx = y.col(v).dot(y.col(static_cast<Eigen::Index>(d.offset({j + 1, k}))));
                if (k < d.height()) ly = y.col(v).dot(y.col(static_cast<Eigen::Index>(d.offset({j, k + 1}))));
                CHECK((*acc.scales[1].lag_x)[static_cast<std::size_t>(v)] == doctest::Approx(lx).epsilon(1e-12));
                CHECK((*acc.scales[1].lag_y)[static_cast<std::size_t>(v)] == doctest::Approx(ly).epsilon(1e-12));
            }
    }
    SUBCASE("empty schedule is rejected") {
        CHECK_THROWS_AS(accumulate_responses(ds, design, SmoothingSchedule{}), DomainError);
    }
}

TEST_CASE("density_mask") {
    const SpatialDomain d(41, 41);
    auto ds = constant_design_data(d, {{20.5, 20.5}, {20.5, 20.5}});
    const auto design = glm::DesignMatrix::from_dataset(ds, {});
    const double diameter = 16.0;
    const auto acc = accumulate_responses(ds, design, SmoothingSchedule({diameter}));
    SUBCASE("half-peak level set is the analytic disc") {
        const auto m = density_mask(acc.scales[0], 0.5);
        const double r = sigma_from_diameter(diameter) * std::sqrt(2.0 * std::log(2.0));
        std::size_t expected = 0;
        for (int k = 1; k <= 41; ++k)
            for (int j = 1; j <= 41; ++j) {
                const auto c = cell_center(d, {j, k});
                const double dist = std::hypot(c.x - 20.5, c.y - 20.5);
                expected += dist <= r ? 1 : 0;
                CHECK(m.at({j, k}) == (dist <= r));
            }
        CHECK(m.count() == expected);
    }
    SUBCASE("tiny fraction covers every rendered cell") {
        const auto m = density_mask(acc.scales[0], 1e-12);
        std::size_t positive = 0;
        for (double v : acc.scales[0].density.values()) positive += v > 0.0 ? 1 : 0;
        CHECK(m.count() == positive);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(density_mask(acc.scales[0], 0.0), DomainError);
        ScaleAccumulator zero;
        zero.density = ScalarField(d);
        CHECK_THROWS_AS(density_mask(zero, 0.1), DomainError);
    }
}

}
