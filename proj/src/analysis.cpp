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

#include "geospm/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace geospm {

std::string to_string(SmoothnessSource s) { return s == SmoothnessSource::analytic ? "analytic" : "residual"; }

SmoothnessSource parse_smoothness_source(const std::string& text) {
    if (text == "analytic") return SmoothnessSource::analytic;
    if (text == "residual") return SmoothnessSource::residual;
    throw std::invalid_argument("unknown smoothness source '" + text + "' (expected analytic or residual)");
}

const ContrastResult& ScaleResult::contrast(const std::string& column) const {
    for (const auto& c : contrasts)
        if (c.column == column) return c;
    throw std::out_of_range("no contrast for column '" + column + "'");
}

ScaleResult infer_scale(const smoothing::ResponseAccumulators& acc, std::size_t scale_index,
                        const AnalysisConfig& config, const std::vector<std::string>& contrast_columns) {
    const auto& scale = acc.scales.at(scale_index);
    ScaleResult out;
    out.diameter = scale.diameter;
    out.fit = glm::fit_glm(acc, scale_index, glm::FitOptions{config.accumulate.parallel});
    out.mask = config.density_fraction ? smoothing::density_mask(scale, *config.density_fraction)
                                       : BinaryMap(acc.domain, true);
    out.smoothness = config.smoothness == SmoothnessSource::analytic
                         ? rft::analytic_smoothness(scale.kernel, acc.domain, out.mask)
                         : rft::residual_smoothness(acc, scale_index, out.fit, out.mask);
    const double threshold =
        rft::fwe_threshold(config.threshold, out.fit.df, out.smoothness, out.mask.count());

    for (const auto& name : contrast_columns) {
        const auto it = std::find(acc.columns.begin(), acc.columns.end(), name);
        if (it == acc.columns.end()) throw glm::DesignError("no design column '" + name + "' to test");
        ContrastResult cr;
        cr.column = name;
        cr.tail = config.threshold.tail;
        const auto index = static_cast<std::size_t>(it - acc.columns.begin());
        cr.t = glm::contrast_t_map(out.fit, glm::Contrast::unit(acc.columns.size(), index, cr.tail));
        cr.threshold = threshold;
        cr.significant = rft::threshold_map(cr.t.t, threshold, cr.tail, out.mask);
        if (cr.tail == glm::Tail::two_sided) cr.signed_maps = rft::split_two_sided(cr.t.t, threshold, out.mask);
        out.contrasts.push_back(std::move(cr));
    }
    return out;
}

AnalysisResult analyze(const Dataset& dataset, const AnalysisConfig& config) {
    const auto design = glm::DesignMatrix::from_dataset(dataset, config.design_columns, config.design);
    auto options = config.accumulate;
    if (config.smoothness == SmoothnessSource::residual) options.lag_products = true;
    const auto acc = smoothing::accumulate_responses(dataset, design, config.schedule, options);

    std::vector<std::string> tested = config.contrasts;
    if (tested.empty()) {
        for (const auto& c : design.names())
            if (c != glm::kConstantColumn) tested.push_back(c);
    }
    AnalysisResult result;
    result.columns = design.names();
    for (std::size_t s = 0; s < acc.scales.size(); ++s) result.scales.push_back(infer_scale(acc, s, config, tested));
    return result;
}

}  // namespace geospm
