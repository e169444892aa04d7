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

#include <array>
#include <span>
#include <string>
#include <vector>

#include "geospm/glm.hpp"
#include "geospm/grid_domain.hpp"
#include "geospm/smoothing.hpp"

namespace geospm::rft {

/// FWHM of a Gaussian with standard deviation sigma.
double fwhm_from_sigma(double sigma);

struct SmoothnessEstimate {
    double fwhm_x = 0.0;  // world units
    double fwhm_y = 0.0;
    std::array<double, 3> resels{};  // R0 (Euler characteristic), R1, R2
    /// Set when the estimator could not produce a finite positive FWHM.
    bool degenerate = false;
    std::string source;  // "analytic" or "residual"
};

/// Euler characteristic of the union of closed mask cells.
int euler_characteristic(const BinaryMap& mask);

/// Resel counts of a 2-D search region: R0 = EC, R1 = half boundary length and
/// R2 = area, each expressed in FWHM units.
std::array<double, 3> resel_counts(const BinaryMap& mask, double fwhm_x, double fwhm_y);

/// Smoothness implied by the rendering kernel: FWHM = sigma * sqrt(8 ln 2) per axis.
SmoothnessEstimate analytic_smoothness(const smoothing::KernelSpec& kernel, const SpatialDomain& domain,
                                       const BinaryMap& mask);

/// Per-axis smoothness from first differences of normalised residual images.
/// Assumes a Gaussian autocorrelation, so the lag-one correlation rho gives
/// lambda = -2 ln rho exactly.
SmoothnessEstimate residual_smoothness(std::span<const ScalarField> residuals, const BinaryMap& mask);

/// Same estimator computed from the accumulated lag products of one scale
/// (requires AccumulateOptions::lag_products) without materialising residuals.
SmoothnessEstimate residual_smoothness(const smoothing::ResponseAccumulators& acc, std::size_t scale_index,
                                       const glm::GlmFit& fit, const BinaryMap& mask);

/// Euler-characteristic density of a Student-t field with nu degrees of freedom
/// in dimension 0, 1 or 2, per resel.
double ec_density_t(double t, double nu, int dim);

/// Sum_d R_d rho_d(u).
double expected_ec(double u, double nu, const std::array<double, 3>& resels);

enum class Correction { rft, bonferroni, min_of_both };

std::string to_string(Correction c);
Correction parse_correction(const std::string& text);

struct ThresholdSpec {
    double alpha = 0.05;
    glm::Tail tail = glm::Tail::positive;
    Correction correction = Correction::min_of_both;

    void validate() const;
};

class ThresholdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Upper-tail Student-t critical value: P(T > u) = p.
double t_upper_quantile(double p, double nu);

/// Voxel-level family-wise error threshold on t (on |t| for two-sided tests).
double fwe_threshold(const ThresholdSpec& spec, double nu, const SmoothnessEstimate& smoothness,
                     std::size_t n_cells);

BinaryMap threshold_map(const ScalarField& t, double threshold, glm::Tail tail, const BinaryMap& mask);

/// Signed significance maps of a two-sided test.
struct SignedMaps {
    BinaryMap positive;
    BinaryMap negative;
};
SignedMaps split_two_sided(const ScalarField& t, double threshold, const BinaryMap& mask);

}  // namespace geospm::rft
