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

// Data-parallel inner loops. Every kernel has a plain serial reference
// (`*_serial`) that the tests compare against, and an OpenMP version
// (`*_parallel`) used by the library.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geospm/covariance.hpp"
#include "geospm/grid_domain.hpp"

namespace geospm::kernels {

/// Interleaved per-cell layout for response accumulation:
/// [w_0 .. w_{C-1}, sum_sq, density, (lag_x, lag_y)] for each cell.
struct AccumulateLayout {
    std::size_t columns = 0;
    bool lag_products = false;
    std::size_t stride() const { return columns + 2 + (lag_products ? 2 : 0); }
};

struct KernelSource {
    std::span<const Point2> locations;   // N observation locations (world units)
    const Eigen::MatrixXd* design = nullptr;  // N x C
    double sigma = 1.0;
    double truncation_radius = 4.0;
    double amplitude = 1.0;
};

/// Adds every observation's kernel response to `out` (cells * stride values).
void accumulate_serial(const SpatialDomain& domain, const KernelSource& src, const AccumulateLayout& layout,
                       std::span<double> out);
void accumulate_parallel(const SpatialDomain& domain, const KernelSource& src, const AccumulateLayout& layout,
                         std::span<double> out);

struct GlmCellsInput {
    const Eigen::MatrixXd* xtx_pinv = nullptr;  // C x C
    std::vector<std::span<const double>> xty;   // C fields of length cells
    std::span<const double> yty;                // cells
};

struct GlmCellsOutput {
    std::vector<std::span<double>> beta;  // C fields
    std::span<double> rss;
    std::size_t clamped = 0;
};

void glm_cells_serial(const GlmCellsInput& in, GlmCellsOutput& out);
void glm_cells_parallel(const GlmCellsInput& in, GlmCellsOutput& out);

/// Ordinary-kriging prediction for a set of target points, given a Cholesky
/// factor of the data covariance.
struct KrigingSystem {
    const Eigen::LLT<Eigen::MatrixXd>* chol = nullptr;  // of C (N x N)
    std::span<const Point2> data;                       // N data locations
    Eigen::VectorXd cinv_ones;                          // C^-1 1
    double ones_cinv_ones = 0.0;                        // 1' C^-1 1
    Eigen::VectorXd residual_weights;                   // C^-1 (y - mu 1)
    double gls_mean = 0.0;
    double total_sill = 0.0;                            // C(0)
};

struct KrigingCellsOutput {
    std::span<double> mean;
    std::span<double> variance;
    std::size_t clamped = 0;
};

void kriging_cells_serial(const KrigingSystem& sys, const kriging::CovarianceModel& model,
                          std::span<const Point2> targets, KrigingCellsOutput& out);
void kriging_cells_parallel(const KrigingSystem& sys, const kriging::CovarianceModel& model,
                            std::span<const Point2> targets, KrigingCellsOutput& out, std::size_t block = 256);

/// Exact squared Euclidean distance (in cells) from every cell to the nearest
/// set cell of `mask`; +inf everywhere when the mask is empty.
std::vector<double> squared_distance_transform_serial(const BinaryMap& mask);
std::vector<double> squared_distance_transform_parallel(const BinaryMap& mask);

}  // namespace geospm::kernels
