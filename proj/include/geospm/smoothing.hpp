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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geospm/design.hpp"
#include "geospm/grid_domain.hpp"

namespace geospm::smoothing {

/// Gaussian sigma whose 95% iso-density circle has the given diameter.
/// The radial CDF of an isotropic bivariate normal is 1 - exp(-r^2 / 2 sigma^2).
double sigma_from_diameter(double diameter);
double diameter_from_sigma(double sigma);

inline constexpr double kDefaultTruncationSigmas = 4.0;

struct KernelSpec {
    double sigma = 1.0;
    double truncation_radius = kDefaultTruncationSigmas;

    KernelSpec() = default;
    KernelSpec(double sigma, double truncation_radius);
    static KernelSpec from_diameter(double diameter, double truncation_sigmas = kDefaultTruncationSigmas);
};

class SmoothingSchedule {
public:
    SmoothingSchedule() = default;
    explicit SmoothingSchedule(std::vector<double> diameters);

    /// "lo:hi:step" (inclusive) or a single value.
    static SmoothingSchedule parse(const std::string& text);
    /// 10, 15, ..., 60 as used for the synthetic noise experiments.
    static SmoothingSchedule synthetic_default();

    const std::vector<double>& diameters() const { return diameters_; }
    std::size_t size() const { return diameters_.size(); }
    bool empty() const { return diameters_.empty(); }
    double operator[](std::size_t i) const { return diameters_[i]; }

private:
    std::vector<double> diameters_;
};

/// Unit-integral Gaussian evaluated at cell centres and multiplied by the cell
/// area, zero beyond the truncation radius.
ScalarField render_kernel(Point2 location, const KernelSpec& kernel, const SpatialDomain& domain);

/// Snaps a location to the centre of its cell (treats X as W).
Point2 congruent_location(const SpatialDomain& domain, Point2 location);

struct AccumulateOptions {
    bool congruent = false;
    /// Also collect sum_i k_i(v) k_i(v + e_x) and the y analogue, needed by
    /// residual-based smoothness estimation.
    bool lag_products = false;
    double truncation_sigmas = kDefaultTruncationSigmas;
    /// Uniform kernel gain; statistics are invariant to it.
    double amplitude = 1.0;
    bool parallel = true;
};

struct ScaleAccumulator {
    double diameter = 0.0;
    KernelSpec kernel;
    std::vector<ScalarField> weighted;  // one per design column: sum_i X_ic k_i(v)
    ScalarField sum_squares;           // sum_i k_i(v)^2
    ScalarField density;               // sum_i k_i(v)
    std::optional<ScalarField> lag_x;  // sum_i k_i(j,k) k_i(j+1,k), zero in the last column
    std::optional<ScalarField> lag_y;  // sum_i k_i(j,k) k_i(j,k+1), zero in the last row
};

/// Sufficient statistics of the per-cell regressions for every scale.
struct ResponseAccumulators {
    SpatialDomain domain;
    std::vector<std::string> columns;
    Eigen::MatrixXd xtx;
    std::size_t observations = 0;
    std::vector<ScaleAccumulator> scales;

    /// Keeps only the listed design columns (for fitting sub-designs).
    ResponseAccumulators subset(const std::vector<std::size_t>& columns) const;
};

ResponseAccumulators accumulate_responses(const Dataset& dataset, const glm::DesignMatrix& design,
                                          const SmoothingSchedule& schedule,
                                          const AccumulateOptions& options = {});

/// Cells whose summed kernel density reaches `fraction` of its maximum.
BinaryMap density_mask(const ScaleAccumulator& scale, double fraction);

}  // namespace geospm::smoothing
