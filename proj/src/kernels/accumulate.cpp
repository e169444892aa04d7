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
#include <numbers>
#include <vector>

#include <omp.h>

#include "geospm/kernels.hpp"

namespace geospm::kernels {

namespace {

// Per-observation separable factors over the truncation bounding box.
struct Footprint {
    int j0 = 0, j1 = -1;  // 0-based inclusive column range
    int k0 = 0, k1 = -1;
    std::vector<double> gx, gy;
    std::vector<double> dx2, dy2;
};

void make_footprint(const SpatialDomain& domain, Point2 p, double sigma, double radius, Footprint& fp) {
    const double h = domain.cell_size();
    const double ux = (p.x - domain.origin().x) / h;
    const double uy = (p.y - domain.origin().y) / h;
    const double r = radius / h;
    fp.j0 = std::max(0, static_cast<int>(std::floor(ux - r - 0.5)));
    fp.j1 = std::min(domain.width() - 1, static_cast<int>(std::ceil(ux + r - 0.5)));
    fp.k0 = std::max(0, static_cast<int>(std::floor(uy - r - 0.5)));
    fp.k1 = std::min(domain.height() - 1, static_cast<int>(std::ceil(uy + r - 0.5)));
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    fp.gx.clear();
    fp.dx2.clear();
    for (int j = fp.j0; j <= fp.j1; ++j) {
        const double d = ((j + 0.5) * h + domain.origin().x) - p.x;
        fp.dx2.push_back(d * d);
        fp.gx.push_back(std::exp(-d * d * inv2s2));
    }
    fp.gy.clear();
    fp.dy2.clear();
    for (int k = fp.k0; k <= fp.k1; ++k) {
        const double d = ((k + 0.5) * h + domain.origin().y) - p.y;
        fp.dy2.push_back(d * d);
        fp.gy.push_back(std::exp(-d * d * inv2s2));
    }
}

void accumulate_range(const SpatialDomain& domain, const KernelSource& src, const AccumulateLayout& layout,
                      std::size_t first, std::size_t last, double* out) {
    const std::size_t C = layout.columns;
    const std::size_t stride = layout.stride();
    const int a = domain.width();
    const double r2 = src.truncation_radius * src.truncation_radius;
    const double norm = src.amplitude * domain.cell_area() / (2.0 * std::numbers::pi * src.sigma * src.sigma);
    const auto& X = *src.design;
    Footprint fp;
    std::vector<double> row(C);
    std::vector<double> krow;

    for (std::size_t i = first; i < last; ++i) {
        make_footprint(domain, src.locations[i], src.sigma, src.truncation_radius, fp);
        for (std::size_t c = 0; c < C; ++c) row[c] = X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        const int nx = fp.j1 - fp.j0 + 1;
        krow.assign(static_cast<std::size_t>(std::max(nx, 0)) + 1, 0.0);
        double* prev_row = nullptr;
        std::vector<double> prev;  // previous row's kernel values for lag_y
        if (layout.lag_products) prev.assign(krow.size(), 0.0);

        for (int k = fp.k0; k <= fp.k1; ++k) {
            const double gyk = fp.gy[static_cast<std::size_t>(k - fp.k0)];
            const double dy2 = fp.dy2[static_cast<std::size_t>(k - fp.k0)];
            for (int t = 0; t < nx; ++t) {
                const double d2 = fp.dx2[static_cast<std::size_t>(t)] + dy2;
                krow[static_cast<std::size_t>(t)] = d2 <= r2 ? norm * fp.gx[static_cast<std::size_t>(t)] * gyk : 0.0;
            }
            krow[static_cast<std::size_t>(nx)] = 0.0;
            double* base = out + (static_cast<std::size_t>(k) * a + fp.j0) * stride;
            for (int t = 0; t < nx; ++t) {
                const double kv = krow[static_cast<std::size_t>(t)];
                if (kv == 0.0) continue;
                double* cell = base + static_cast<std::size_t>(t) * stride;
                for (std::size_t c = 0; c < C; ++c) cell[c] += row[c] * kv;
                cell[C] += kv * kv;
                cell[C + 1] += kv;
                if (layout.lag_products) {
                    // Footprint ends at the truncation box; neighbours beyond it are zero.
                    if (fp.j0 + t + 1 < a) cell[C + 2] += kv * krow[static_cast<std::size_t>(t) + 1];
                }
            }
            if (layout.lag_products && prev_row != nullptr) {
                double* below = out + (static_cast<std::size_t>(k - 1) * a + fp.j0) * stride;
                for (int t = 0; t < nx; ++t)
                    below[static_cast<std::size_t>(t) * stride + C + 3] += prev[static_cast<std::size_t>(t)] * krow[static_cast<std::size_t>(t)];
            }
            if (layout.lag_products) {
                std::copy(krow.begin(), krow.end(), prev.begin());
                prev_row = prev.data();
            }
        }
    }
}

}  // namespace

void accumulate_serial(const SpatialDomain& domain, const KernelSource& src, const AccumulateLayout& layout,
                       std::span<double> out) {
    accumulate_range(domain, src, layout, 0, src.locations.size(), out.data());
}

void accumulate_parallel(const SpatialDomain& domain, const KernelSource& src, const AccumulateLayout& layout,
                         std::span<double> out) {
    const std::size_t n = src.locations.size();
    const int threads = std::max(1, std::min<int>(omp_get_max_threads(), static_cast<int>(n / 64) + 1));
    if (threads == 1) {
        accumulate_range(domain, src, layout, 0, n, out.data());
        return;
    }
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(threads) - 1);
#pragma omp parallel num_threads(threads)
    {
        const int t = omp_get_thread_num();
        const std::size_t first = n * static_cast<std::size_t>(t) / threads;
        const std::size_t last = n * static_cast<std::size_t>(t + 1) / threads;
        double* target = out.data();
        if (t > 0) {
            auto& buf = partial[static_cast<std::size_t>(t) - 1];
            buf.assign(out.size(), 0.0);
            target = buf.data();
        }
        accumulate_range(domain, src, layout, first, last, target);
#pragma omp barrier
        // Merge in fixed thread order so results do not depend on scheduling.
#pragma omp for schedule(static)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(out.size()); ++c) {
            double sum = out[static_cast<std::size_t>(c)];
            for (const auto& buf : partial) sum += buf[static_cast<std::size_t>(c)];
            out[static_cast<std::size_t>(c)] = sum;
        }
    }
}

}  // namespace geospm::kernels
