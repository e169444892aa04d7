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

#include "geospm/scale_selection.hpp"

#include <stdexcept>

namespace geospm::scale {

std::string condition_column(int condition) { return "condition_" + std::to_string(condition); }

SpatialConditionEncoding spatial_conditions(const Dataset& dataset, const std::vector<std::string>& variables) {
    std::vector<std::size_t> idx;
    if (variables.empty()) {
        for (std::size_t v = 0; v < dataset.variable_count(); ++v) idx.push_back(v);
    } else {
        for (const auto& name : variables) idx.push_back(dataset.variable_index(name));
    }
    if (idx.empty() || idx.size() > 2)
        throw std::invalid_argument("spatial conditions support one or two variables");
    SpatialConditionEncoding enc;
    enc.variables = static_cast<int>(idx.size());
    const int k = 1 << enc.variables;
    enc.counts.assign(static_cast<std::size_t>(k), 0);
    enc.one_hot.domain = dataset.domain;
    for (int c = 0; c < k; ++c) enc.one_hot.variable_names.push_back(condition_column(c));
    enc.condition.reserve(dataset.size());
    for (const auto& obs : dataset.observations) {
        int c = 0;
        for (std::size_t p = 0; p < idx.size(); ++p)
            if (obs.values.at(idx[p]) > 0.5) c |= 1 << p;
        enc.condition.push_back(c);
        ++enc.counts[static_cast<std::size_t>(c)];
        Observation o;
        o.location = obs.location;
        o.values.assign(static_cast<std::size_t>(k), 0.0);
        o.values[static_cast<std::size_t>(c)] = 1.0;
        enc.one_hot.observations.push_back(std::move(o));
    }
    return enc;
}

std::size_t coverage_score(std::span<const BinaryMap> maps) {
    if (maps.empty()) return 0;
    const auto& dom = maps.front().domain();
    std::vector<unsigned> hits(dom.cell_count(), 0);
    for (const auto& m : maps) {
        require_same_domain(dom, m.domain(), "coverage maps");
        const auto& raw = m.raw();
        for (std::size_t v = 0; v < raw.size(); ++v) hits[v] += raw[v] ? 1u : 0u;
    }
    std::size_t score = 0;
    for (auto h : hits) score += h == 1 ? 1 : 0;
    return score;
}

double select_scale(const std::vector<ScaleScore>& scores) {
    if (scores.empty()) throw std::invalid_argument("select_scale needs at least one score");
    const ScaleScore* best = &scores.front();
    for (const auto& s : scores) {
        if (s.score > best->score || (s.score == best->score && s.diameter < best->diameter)) best = &s;
    }
    return best->diameter;
}

ScaleSelection score_scales(const Dataset& dataset, const std::vector<std::string>& variables,
                            const smoothing::SmoothingSchedule& schedule, const ScaleSelectionOptions& options) {
    const auto enc = spatial_conditions(dataset, variables);
    std::vector<std::string> present;
    for (std::size_t c = 0; c < enc.counts.size(); ++c)
        if (enc.counts[c] > 0) present.push_back(condition_column(static_cast<int>(c)));

    AnalysisConfig config;
    config.design_columns = present;
    config.design.include_constant = false;
    config.schedule = schedule;
    config.threshold = rft::ThresholdSpec{options.alpha, glm::Tail::positive, options.correction};
    config.accumulate.congruent = options.congruent;
    config.accumulate.parallel = options.parallel;
    config.accumulate.lag_products = options.smoothness == SmoothnessSource::residual;
    config.smoothness = options.smoothness;

    const auto design = glm::DesignMatrix::from_dataset(enc.one_hot, present, config.design);
    const auto acc = smoothing::accumulate_responses(enc.one_hot, design, schedule, config.accumulate);

    ScaleSelection out;
    for (std::size_t s = 0; s < acc.scales.size(); ++s) {
        const auto result = infer_scale(acc, s, config, present);
        std::vector<BinaryMap> maps;
        for (const auto& c : result.contrasts) maps.push_back(c.significant);
        out.scores.push_back({result.diameter, coverage_score(maps)});
    }
    out.selected = select_scale(out.scores);
    return out;
}

}  // namespace geospm::scale
