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

#include "fields.hpp"
#include "geospm/rft_inference.hpp"
#include "geospm/smoothing.hpp"

using namespace geospm;
using namespace geospm::rft;

namespace {

// Student-t upper tail by Simpson integration of the density.
double t_tail_numeric(double t, double nu) {
    const double c = std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) / std::sqrt(nu * std::numbers::pi);
    auto pdf = [&](double x) { return c * std::pow(1.0 + x * x / nu, -(nu + 1) / 2); };
    const double hi = t + 200.0;
    const int n = 200000;
    const double h = (hi - t) / n;
    double s = pdf(t) + pdf(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(t + i * h);
    return s * h / 3.0;
}

BinaryMap disc(const SpatialDomain& d, Point2 c, double r) {
    BinaryMap m(d);
    for (int k = 1; k <= d.height(); ++k)
        for (int j = 1; j <= d.width(); ++j) {
            const auto p = cell_center(d, {j, k});
            m.set(CellIndex{j, k}, std::hypot(p.x - c.x, p.y - c.y) <= r);
        }
    return m;
}

std::vector<ScalarField> noise_fields(const SpatialDomain& d, double sigma_px, int count, std::uint64_t seed) {
    toy::SmoothNoise gen(d.width(), d.height(), sigma_px);
    std::mt19937_64 rng(seed);
    std::vector<ScalarField> out;
    for (int i = 0; i < count; ++i) out.emplace_back(d, gen.sample(rng));
    return out;
}

}  // namespace

TEST_SUITE("rft_inference") {

TEST_CASE("analytic smoothness examples") {
    CHECK(fwhm_from_sigma(12.2562) == doctest::Approx(28.861).epsilon(1e-4));
    const SpatialDomain d(120, 120);
    const BinaryMap full(d, true);
    const auto r = resel_counts(full, 10.0, 10.0);
    CHECK(r[2] == doctest::Approx(144.0).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(r[0] == 1.0);
    const auto est = analytic_smoothness(smoothing::KernelSpec::from_diameter(60.0), d, full);
    CHECK(est.fwhm_x == doctest::Approx(28.861).epsilon(1e-4));
    CHECK(est.source == "analytic");
    CHECK_THROWS_AS(analytic_smoothness(smoothing::KernelSpec::from_diameter(60.0), d, BinaryMap(d)), ThresholdError);
}

TEST_CASE("Euler characteristic") {
    const SpatialDomain d(30, 30);
    CHECK(euler_characteristic(disc(d, {15, 15}, 8)) == 1);
    auto ring = disc(d, {15, 15}, 10);
    const auto hole = disc(d, {15, 15}, 4);
    for (std::size_t v = 0; v < ring.size(); ++v)
        if (hole[v]) ring.set(v, false);
    CHECK(euler_characteristic(ring) == 0);
    auto two = disc(d, {7, 7}, 4);
    const auto other = disc(d, {22, 22}, 4);
    for (std::size_t v = 0; v < two.size(); ++v)
        if (other[v]) two.set(v, true);
    CHECK(euler_characteristic(two) == 2);
    // Diagonal neighbours share a corner, so the closed union is connected.
    BinaryMap diag(SpatialDomain(3, 3));
    diag.set(CellIndex{1, 1}, true);
    diag.set(CellIndex{2, 2}, true);
    CHECK(euler_characteristic(diag) == 1);
    CHECK(euler_characteristic(BinaryMap(d)) == 0);
}

TEST_CASE("EC densities") {
    for (double nu : {5.0, 30.0, 200.0}) {
        CHECK(ec_density_t(0.0, nu, 0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(ec_density_t(0.0, nu, 2) == 0.0);
    }
    CHECK(ec_density_t(2.0, 30, 0) == doctest::Approx(0.02731).epsilon(1e-3));
    CHECK(ec_density_t(2.0, 30, 0) == doctest::Approx(t_tail_numeric(2.0, 30)).epsilon(1e-9));
    CHECK(ec_density_t(3.5, 12, 0) == doctest::Approx(t_tail_numeric(3.5, 12)).epsilon(1e-9));
    // Large nu approaches the Gaussian densities.
    const double u = 3.0;
    const double g1 = std::sqrt(4 * std::log(2.0)) / (2 * std::numbers::pi) * std::exp(-u * u / 2);
    const double g2 = 4 * std::log(2.0) / std::pow(2 * std::numbers::pi, 1.5) * u * std::exp(-u * u / 2);
    CHECK(ec_density_t(u, 1e7, 1) == doctest::Approx(g1).epsilon(1e-5));
    CHECK(ec_density_t(u, 1e7, 2) == doctest::Approx(g2).epsilon(1e-5));
    CHECK_THROWS(ec_density_t(1.0, 10, 3));
}

TEST_CASE("expected EC decreases over the search bracket") {
    const std::array<double, 3> r{1.0, 30.0, 50.0};
    const double lo = t_upper_quantile(0.05, 100);
    double prev = expected_ec(lo, 100, r);
    for (double u = lo + 0.01; u < 100.0; u += 0.01) {
        const double e = expected_ec(u, 100, r);
        REQUIRE(e < prev);
        REQUIRE(std::abs(expected_ec(u + 1e-7, 100, r) - e) <= 1e-5 * e);  // continuous
        prev = e;
    }
}

TEST_CASE("FWE threshold examples") {
    SmoothnessEstimate s;
    s.resels = {1.0, 0.0, 0.0};
    const ThresholdSpec rft_only{0.05, glm::Tail::positive, Correction::rft};
    CHECK(fwe_threshold(rft_only, 20, s, 100) == doctest::Approx(t_upper_quantile(0.05, 20)).epsilon(1e-12));

    double prev = 0.0;
    for (double r2 : {1.0, 5.0, 20.0, 80.0, 300.0}) {
        s.resels = {1.0, 10.0, r2};
        const double u = fwe_threshold(rft_only, 50, s, 100000);
        CHECK(u > prev);
        CHECK(expected_ec(u, 50, s.resels) == doctest::Approx(0.05).epsilon(1e-6));
        prev = u;
    }

    s.resels = {1.0, 30.0, 50.0};
    const double rft = fwe_threshold(rft_only, 100, s, 5000);
    const double bon = fwe_threshold({0.05, glm::Tail::positive, Correction::bonferroni}, 100, s, 5000);
    const double both = fwe_threshold({0.05, glm::Tail::positive, Correction::min_of_both}, 100, s, 5000);
    CHECK(bon == doctest::Approx(t_upper_quantile(0.05 / 5000, 100)).epsilon(1e-12));
    CHECK(both == std::min(rft, bon));
    CHECK(both <= rft);
    CHECK(both <= bon);
    const double two = fwe_threshold({0.05, glm::Tail::two_sided, Correction::rft}, 100, s, 5000);
    CHECK(two == doctest::Approx(fwe_threshold({0.025, glm::Tail::positive, Correction::rft}, 100, s, 5000)));

    SmoothnessEstimate degenerate;
    degenerate.degenerate = true;
    CHECK_THROWS_AS(fwe_threshold(rft_only, 10, degenerate, 10), ThresholdError);
    CHECK(fwe_threshold({0.05, glm::Tail::positive, Correction::min_of_both}, 10, degenerate, 10) ==
          doctest::Approx(t_upper_quantile(0.005, 10)));
    CHECK_THROWS_AS(fwe_threshold({1.5, glm::Tail::positive, Correction::rft}, 10, s, 10), ThresholdError);
    CHECK_THROWS_AS(fwe_threshold(rft_only, 0.5, s, 10), ThresholdError);
    CHECK(parse_correction("min_of_both") == Correction::min_of_both);
    CHECK_THROWS(parse_correction("holm"));
}

TEST_CASE("RFT threshold holds the family-wise rate on simulated smooth t-fields") {
    // Strip of 282 x 18 pixels at FWHM 10 px: resels R0 = 1, R1 = 30, R2 = 50.76.
    const int w = 282, h = 18;
    const double sigma_px = 10.0 / std::sqrt(8.0 * std::log(2.0));
    const SpatialDomain d(w, h);
    const BinaryMap mask(d, true);
    const auto resels = resel_counts(mask, 10.0, 10.0);
    CHECK(resels[1] == doctest::Approx(30.0));
    SmoothnessEstimate s;
    s.fwhm_x = s.fwhm_y = 10.0;
    s.resels = resels;
    const int nu = 100;
    const double u = fwe_threshold({0.05, glm::Tail::positive, Correction::rft}, nu, s, mask.count());

    // t-fields are one-sample t statistics of nu + 1 fields drawn from a shared pool.
    toy::SmoothNoise gen(w, h, sigma_px);
    std::mt19937_64 rng(20260101);
    const int pool_size = 3000;
    std::vector<std::vector<double>> pool;
    pool.reserve(pool_size);
    for (int i = 0; i < pool_size; ++i) pool.push_back(gen.sample(rng));
    const int runs = 2000;
    const std::size_t cells = static_cast<std::size_t>(w) * h;
    std::vector<int> idx(pool_size);
    for (int i = 0; i < pool_size; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<double> sum(cells), sq(cells);
    int hits = 0;
    for (int r = 0; r < runs; ++r) {
        for (int i = 0; i <= nu; ++i) {
            std::uniform_int_distribution<int> pick(i, pool_size - 1);
            std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
        }
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(sq.begin(), sq.end(), 0.0);
        for (int i = 0; i <= nu; ++i) {
            const auto& f = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
            for (std::size_t v = 0; v < cells; ++v) {
                sum[v] += f[v];
                sq[v] += f[v] * f[v];
            }
        }
        const double n = nu + 1.0;
        bool any = false;
        for (std::size_t v = 0; v < cells && !any; ++v) {
            const double mean = sum[v] / n;
            const double var = (sq[v] - n * mean * mean) / (n - 1.0);
            any = std::sqrt(n) * mean / std::sqrt(var) >= u;
        }
        hits += any ? 1 : 0;
    }
    const double fwer = static_cast<double>(hits) / runs;
    MESSAGE("threshold " << u << ", Monte-Carlo FWER " << fwer);
    CHECK(std::abs(fwer - 0.05) <= 0.015);
}

TEST_CASE("threshold_map examples") {
    const SpatialDomain d(4, 4);
    const BinaryMap mask(d, true);
    ScalarField t(d, 0.0);
    CHECK(threshold_map(t, 2.0, glm::Tail::two_sided, mask).empty());
    for (std::size_t v = 0; v < t.size(); ++v) t[v] = (v % 2 ? 1.0 : -1.0) * (3.0 + static_cast<double>(v));
    CHECK(threshold_map(t, 2.5, glm::Tail::two_sided, mask) == mask);
    ScalarField one(d, 0.5);
    one.at({3, 2}) = 4.0;
    const auto m = threshold_map(one, 3.0, glm::Tail::positive, mask);
    CHECK(m.count() == 1);
    CHECK(m.at({3, 2}));
    CHECK(threshold_map(one, 3.0, glm::Tail::negative, mask).empty());
    one.at({1, 1}) = -5.0;
    CHECK(threshold_map(one, 3.0, glm::Tail::negative, mask).at({1, 1}));
    BinaryMap partial(d);
    partial.set(CellIndex{1, 1}, true);
    CHECK(threshold_map(one, 3.0, glm::Tail::two_sided, partial).count() == 1);
    const auto split = split_two_sided(one, 3.0, mask);
    CHECK(split.positive.count() == 1);
    CHECK(split.negative.count() == 1);
    CHECK(split.negative.at({1, 1}));
    CHECK_THROWS_AS(threshold_map(one, 0.0, glm::Tail::positive, mask), ThresholdError);
}

TEST_CASE("residual smoothness recovers the FWHM of smoothed noise") {
    const double sigma_px = 3.0;
    const SpatialDomain d(64, 64);
    const auto res = noise_fields(d, sigma_px, 40, 77);
    const BinaryMap mask(d, true);
    const auto est = residual_smoothness(res, mask);
    const double expected = fwhm_from_sigma(sigma_px);
    CHECK_FALSE(est.degenerate);
    CHECK(std::abs(est.fwhm_x / expected - 1.0) < 0.10);
    CHECK(std::abs(est.fwhm_y / expected - 1.0) < 0.10);

    // Same world-unit smoothness on a grid twice as fine.
    const SpatialDomain fine(128, 128, {}, 0.5);
    const auto res2 = noise_fields(fine, 2.0 * sigma_px, 40, 78);
    const auto est2 = residual_smoothness(res2, BinaryMap(fine, true));
    CHECK(std::abs(est2.fwhm_x / est.fwhm_x - 1.0) < 0.05);
    CHECK(std::abs(est2.fwhm_y / est.fwhm_y - 1.0) < 0.05);
}

TEST_CASE("residual smoothness edge cases") {
    const SpatialDomain d(10, 10);
    const BinaryMap mask(d, true);
    std::vector<ScalarField> constant(4, ScalarField(d, 1.0));
    for (std::size_t i = 0; i < constant.size(); ++i)
        std::fill(constant[i].values().begin(), constant[i].values().end(), static_cast<double>(i) - 1.5);
    const auto est = residual_smoothness(constant, mask);
    CHECK(est.degenerate);
    CHECK(std::isinf(est.fwhm_x));
    std::vector<ScalarField> two(2, ScalarField(d, 1.0));
    CHECK_THROWS_AS(residual_smoothness(two, mask), ThresholdError);
}

}
