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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geospm/design.hpp"
#include "geospm/grid_domain.hpp"
#include "geospm/smoothing.hpp"

namespace geospm::glm {

enum class Tail { positive, negative, two_sided };

std::string to_string(Tail tail);
Tail parse_tail(const std::string& text);

class ContrastError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Contrast {
    Eigen::VectorXd weights;
    Tail tail = Tail::positive;

    Contrast() = default;
    Contrast(Eigen::VectorXd w, Tail t);
    /// Unit contrast on one named column of `design`.
    static Contrast unit(const DesignMatrix& design, const std::string& column, Tail tail);
    static Contrast unit(std::size_t columns, std::size_t index, Tail tail);
};

struct GlmFit {
    SpatialDomain domain;
    std::vector<std::string> columns;
    std::vector<ScalarField> beta;
    ScalarField sigma2;
    int df = 0;
    int rank = 0;
    Eigen::MatrixXd xtx;
    Eigen::MatrixXd xtx_pinv;
    std::size_t clamped_cells = 0;
    double diameter = 0.0;

    bool rank_deficient() const { return rank < static_cast<int>(columns.size()); }
};

struct FitOptions {
    bool parallel = true;
    /// Eigenvalues below tolerance * max eigenvalue are treated as zero.
    double rank_tolerance = 1e-10;
};

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix and its numerical rank.
std::pair<Eigen::MatrixXd, int> symmetric_pinv(const Eigen::MatrixXd& m, double tolerance = 1e-10);

/// Least-squares fit of every cell's responses on the shared design.
GlmFit fit_glm(const smoothing::ResponseAccumulators& acc, std::size_t scale_index, const FitOptions& options = {});

struct TField {
    ScalarField t;
    /// Cells with zero residual variance, mapped to +-inf (or 0 when the effect is 0).
    std::size_t degenerate_cells = 0;
    int df = 0;
};

TField contrast_t_map(const GlmFit& fit, const Contrast& contrast);

/// Residual images e_i(v) = k_i(v) - x_i' beta(v), materialised explicitly.
std::vector<ScalarField> residual_fields(const Dataset& dataset, const DesignMatrix& design, const GlmFit& fit,
                                         const smoothing::AccumulateOptions& options = {});

}  // namespace geospm::glm
