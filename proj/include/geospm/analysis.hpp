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

#include "geospm/design.hpp"
#include "geospm/glm.hpp"
#include "geospm/rft_inference.hpp"
#include "geospm/smoothing.hpp"

namespace geospm {

enum class SmoothnessSource { analytic, residual };

std::string to_string(SmoothnessSource s);
SmoothnessSource parse_smoothness_source(const std::string& text);

struct AnalysisConfig {
    std::vector<std::string> design_columns;
    glm::DesignOptions design;
    smoothing::SmoothingSchedule schedule;
    rft::ThresholdSpec threshold;
    smoothing::AccumulateOptions accumulate;
    SmoothnessSource smoothness = SmoothnessSource::analytic;
    /// Restricts inference to cells reaching this fraction of the peak density.
    std::optional<double> density_fraction;
    /// Columns to test; empty = every non-constant column.
    std::vector<std::string> contrasts;
};

struct ContrastResult {
    std::string column;
    glm::Tail tail = glm::Tail::positive;
    glm::TField t;
    double threshold = 0.0;
    BinaryMap significant;  // on |t| for two-sided tests
    std::optional<rft::SignedMaps> signed_maps;
};

struct ScaleResult {
    double diameter = 0.0;
    glm::GlmFit fit;
    BinaryMap mask;
    rft::SmoothnessEstimate smoothness;
    std::vector<ContrastResult> contrasts;

    const ContrastResult& contrast(const std::string& column) const;
};

struct AnalysisResult {
    std::vector<std::string> columns;
    std::vector<ScaleResult> scales;
};

/// Kernel rendering, per-cell GLM and FWE thresholding for every scale of the schedule.
AnalysisResult analyze(const Dataset& dataset, const AnalysisConfig& config);

/// Inference on an already fitted scale (shared by analyze and scale scoring).
ScaleResult infer_scale(const smoothing::ResponseAccumulators& acc, std::size_t scale_index,
                        const AnalysisConfig& config, const std::vector<std::string>& contrast_columns);

}  // namespace geospm
