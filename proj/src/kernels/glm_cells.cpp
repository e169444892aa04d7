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

#include <cstddef>

#include "geospm/kernels.hpp"

namespace geospm::kernels {

namespace {

// Returns true when the residual sum of squares had to be clamped at zero.
inline bool solve_cell(const Eigen::MatrixXd& pinv, const GlmCellsInput& in, GlmCellsOutput& out, std::size_t v,
                       Eigen::VectorXd& xty, Eigen::VectorXd& beta) {
    const Eigen::Index C = pinv.rows();
    for (Eigen::Index c = 0; c < C; ++c) xty[c] = in.xty[static_cast<std::size_t>(c)][v];
    beta.noalias() = pinv * xty;
    for (Eigen::Index c = 0; c < C; ++c) out.beta[static_cast<std::size_t>(c)][v] = beta[c];
    const double rss = in.yty[v] - xty.dot(beta);
    if (rss < 0.0) {
        out.rss[v] = 0.0;
        return true;
    }
    out.rss[v] = rss;
    return false;
}

}  // namespace

void glm_cells_serial(const GlmCellsInput& in, GlmCellsOutput& out) {
    const auto& pinv = *in.xtx_pinv;
    Eigen::VectorXd xty(pinv.rows()), beta(pinv.rows());
    std::size_t clamped = 0;
    for (std::size_t v = 0; v < in.yty.size(); ++v) clamped += solve_cell(pinv, in, out, v, xty, beta) ? 1 : 0;
    out.clamped = clamped;
}

void glm_cells_parallel(const GlmCellsInput& in, GlmCellsOutput& out) {
    const auto& pinv = *in.xtx_pinv;
    const auto cells = static_cast<std::ptrdiff_t>(in.yty.size());
    std::size_t clamped = 0;
#pragma omp parallel reduction(+ : clamped)
    {
        Eigen::VectorXd xty(pinv.rows()), beta(pinv.rows());
#pragma omp for schedule(static)
        for (std::ptrdiff_t v = 0; v < cells; ++v)
            clamped += solve_cell(pinv, in, out, static_cast<std::size_t>(v), xty, beta) ? 1 : 0;
    }
    out.clamped = clamped;
}

}  // namespace geospm::kernels
