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
#include <cstddef>
#include <string>
#include <vector>

#include "geospm/grid_domain.hpp"

namespace geospm::metrics {

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
};

/// `recovered` plays the role of the prediction, `target` the ground truth.
ConfusionCounts confusion(const BinaryMap& recovered, const BinaryMap& target);

double jaccard(const ConfusionCounts& c);
double dice(const ConfusionCounts& c);
/// 0 when a marginal is degenerate, unless both maps agree everywhere.
double matthews(const ConfusionCounts& c);
/// 2 I(A;B) / (H(A) + H(B)) with plug-in entropies in nats.
double symmetric_uncertainty(const ConfusionCounts& c);

/// Directed mean nearest-neighbour distance from the set cells of `from` to
/// those of `to`, in cell units. Requires both maps nonempty.
double directed_mean_distance(const BinaryMap& from, const BinaryMap& to);
/// max of both directed distances, in cell units.
double modified_hausdorff(const BinaryMap& a, const BinaryMap& b);

enum ScoreFlag : unsigned {
    kBothEmpty = 1u << 0,
    kRecoveredEmpty = 1u << 1,
    kTargetEmpty = 1u << 2,
    kDegenerateMarginal = 1u << 3,
};

std::string describe_flags(unsigned flags);

struct ScoreRecord {
    double jaccard = 0.0;
    double dice = 0.0;
    double mcc = 0.0;
    double su = 0.0;
    double mhd = 0.0;  // divided by the grid diagonal
    ConfusionCounts counts;
    unsigned flags = 0;
};

inline constexpr std::array<const char*, 5> kMetricNames = {"jaccard", "dice", "mcc", "su", "mhd"};

std::array<double, 5> as_array(const ScoreRecord& r);

ScoreRecord score_pair(const BinaryMap& recovered, const BinaryMap& target);

struct MetricSummary {
    double mean = 0.0;
    double sd = 0.0;  // n - 1 denominator; 0 when n = 1
};

struct AggregateScores {
    std::size_t n = 0;
    std::array<MetricSummary, 5> metrics{};
    bool single_run() const { return n == 1; }
};

/// Order-independent: values are summed in sorted order.
AggregateScores aggregate_scores(const std::vector<ScoreRecord>& runs);
MetricSummary summarize(std::vector<double> values);

}  // namespace geospm::metrics
