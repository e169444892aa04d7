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

#include <span>
#include <string>
#include <vector>

#include "geospm/analysis.hpp"
#include "geospm/grid_domain.hpp"

namespace geospm::scale {

struct SpatialConditionEncoding {
    int variables = 1;
    std::vector<int> condition;          // per observation, sum_p 2^p [y_p > 0.5]
    std::vector<std::size_t> counts;     // observations per condition (2^P entries)
    Dataset one_hot;                     // columns condition_0 .. condition_{2^P - 1}
};

/// Conditions from the listed variables (all variables when empty); P must be 1 or 2.
SpatialConditionEncoding spatial_conditions(const Dataset& dataset, const std::vector<std::string>& variables = {});

std::string condition_column(int condition);

/// Cells significant in exactly one of the maps.
std::size_t coverage_score(std::span<const BinaryMap> maps);

struct ScaleScore {
    double diameter = 0.0;
    std::size_t score = 0;
};

/// Highest score; ties go to the smallest diameter.
double select_scale(const std::vector<ScaleScore>& scores);

struct ScaleSelection {
    std::vector<ScaleScore> scores;
    double selected = 0.0;
};

struct ScaleSelectionOptions {
    double alpha = 0.05;
    rft::Correction correction = rft::Correction::min_of_both;
    SmoothnessSource smoothness = SmoothnessSource::analytic;
    bool congruent = false;
    bool parallel = true;
};

/// Fits the one-hot condition design (no constant) at every scale, tests each
/// condition in the positive tail at FWE and scores the coverage.
ScaleSelection score_scales(const Dataset& dataset, const std::vector<std::string>& variables,
                            const smoothing::SmoothingSchedule& schedule,
                            const ScaleSelectionOptions& options = {});

}  // namespace geospm::scale
