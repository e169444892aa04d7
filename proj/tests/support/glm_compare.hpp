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

#include <algorithm>
#include <cmath>
#include <string>

#include "geospm/glm.hpp"
#include "geospm/smoothing.hpp"
#include "oracles.hpp"
#include "toy.hpp"

namespace toy {

struct GlmComparison {
    double beta = 0.0;    // max relative error over cells and columns
    double sigma2 = 0.0;
    double t = 0.0;
    bool degenerate_agree = true;
    bool df_agree = true;
};

inline double relative_error(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

/// Fits one scale with the streaming library and with the materialised oracle.
inline GlmComparison compare_glm(const geospm::Dataset& ds, const std::vector<std::string>& columns, double diameter,
                                 bool parallel) {
    using namespace geospm;
    const auto design = glm::DesignMatrix::from_dataset(ds, columns);
    const auto acc = smoothing::accumulate_responses(ds, design, smoothing::SmoothingSchedule({diameter}),
                                                     {.parallel = parallel});
    const auto fit = glm::fit_glm(acc, 0, {.parallel = parallel});
    const double sigma = oracle::sigma_for_diameter(diameter);
    const auto y = oracle::materialise_responses(locations(ds), ds.domain, sigma, 4.0 * sigma);
    const auto ref = oracle::brute_force_glm(design.matrix(), y);

    GlmComparison out;
    out.df_agree = ref.df == fit.df && ref.rank == fit.rank;
    const auto cells = static_cast<Eigen::Index>(ds.domain.cell_count());
    for (std::size_t c = 0; c < design.cols(); ++c) {
        const auto tf = glm::contrast_t_map(fit, glm::Contrast::unit(design.cols(), c, glm::Tail::positive));
        for (Eigen::Index v = 0; v < cells; ++v) {
            const auto sv = static_cast<std::size_t>(v);
            out.beta = std::max(out.beta, relative_error(fit.beta[c][sv], ref.beta(static_cast<Eigen::Index>(c), v)));
            if (ref.sigma2[v] == 0.0) {
                // No observation reaches the cell: both sides see an all-zero response.
                out.degenerate_agree = out.degenerate_agree && fit.sigma2[sv] == 0.0 && tf.t[sv] == 0.0;
                continue;
            }
            out.t = std::max(out.t, relative_error(tf.t[sv], ref.t(static_cast<Eigen::Index>(c), v)));
        }
    }
    for (Eigen::Index v = 0; v < cells; ++v)
        out.sigma2 = std::max(out.sigma2, relative_error(fit.sigma2[static_cast<std::size_t>(v)], ref.sigma2[v]));
    return out;
}

}  // namespace toy
