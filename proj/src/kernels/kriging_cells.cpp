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

#include <algorithm>
#include <cmath>

#include "geospm/kernels.hpp"

namespace geospm::kernels {

namespace {

inline void fill_covariances(const KrigingSystem& sys, const kriging::CovarianceModel& model, Point2 p,
                             double* col) {
    const std::size_t n = sys.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = sys.data[i].x - p.x;
        const double dy = sys.data[i].y - p.y;
        const double h = std::sqrt(dx * dx + dy * dy);
        // An exactly coincident target picks up the nugget as well.
        col[i] = h == 0.0 ? model.total_sill() : model.covariance(h);
    }
}

inline bool finish_point(const KrigingSystem& sys, const Eigen::Ref<const Eigen::VectorXd>& c, double quad,
                         double& mean, double& variance) {
    const double ones_cinv_c = sys.cinv_ones.dot(c);
    mean = sys.gls_mean + sys.residual_weights.dot(c);
    const double lagrange = 1.0 - ones_cinv_c;
    double var = sys.total_sill - quad + lagrange * lagrange / sys.ones_cinv_ones;
    if (var < 0.0) {
        variance = 0.0;
        return true;
    }
    variance = var;
    return false;
}

}  // namespace

void kriging_cells_serial(const KrigingSystem& sys, const kriging::CovarianceModel& model,
                          std::span<const Point2> targets, KrigingCellsOutput& out) {
    const auto n = static_cast<Eigen::Index>(sys.data.size());
    const auto& L = sys.chol->matrixL();
    Eigen::VectorXd c(n), w(n);
    std::size_t clamped = 0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        fill_covariances(sys, model, targets[t], c.data());
        w = L.solve(c);
        clamped += finish_point(sys, c, w.squaredNorm(), out.mean[t], out.variance[t]) ? 1 : 0;
    }
    out.clamped = clamped;
}

void kriging_cells_parallel(const KrigingSystem& sys, const kriging::CovarianceModel& model,
                            std::span<const Point2> targets, KrigingCellsOutput& out, std::size_t block) {
    const auto n = static_cast<Eigen::Index>(sys.data.size());
    const auto& L = sys.chol->matrixL();
    const std::size_t total = targets.size();
    const auto blocks = static_cast<std::ptrdiff_t>((total + block - 1) / block);
    std::size_t clamped = 0;
#pragma omp parallel reduction(+ : clamped)
    {
        Eigen::MatrixXd cov, solved;
#pragma omp for schedule(dynamic)
        for (std::ptrdiff_t b = 0; b < blocks; ++b) {
            const std::size_t first = static_cast<std::size_t>(b) * block;
            const std::size_t count = std::min(block, total - first);
            cov.resize(n, static_cast<Eigen::Index>(count));
            for (std::size_t t = 0; t < count; ++t)
                fill_covariances(sys, model, targets[first + t], cov.col(static_cast<Eigen::Index>(t)).data());
            solved = cov;
            L.solveInPlace(solved);
            for (std::size_t t = 0; t < count; ++t) {
                const auto col = static_cast<Eigen::Index>(t);
                clamped += finish_point(sys, cov.col(col), solved.col(col).squaredNorm(), out.mean[first + t],
                                        out.variance[first + t])
                               ? 1
                               : 0;
            }
        }
    }
    out.clamped = clamped;
}

}  // namespace geospm::kernels
