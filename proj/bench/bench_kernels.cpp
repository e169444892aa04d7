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

// Serial reference versus OpenMP kernels on desk-scale inputs.

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "geospm/kernels.hpp"
#include "geospm/smoothing.hpp"

using namespace geospm;
using namespace geospm::kernels;

namespace {

struct Inputs {
    SpatialDomain domain{220, 210};
    std::vector<Point2> locations;
    Eigen::MatrixXd design;
};

const Inputs& inputs() {
    static const Inputs in = [] {
        Inputs i;
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> ux(0.0, 220.0), uy(0.0, 210.0);
        const int n = 3200;
        i.design.resize(n, 3);
        for (int k = 0; k < n; ++k) {
            i.locations.push_back({ux(rng), uy(rng)});
            i.design(k, 0) = 1.0;
            i.design(k, 1) = static_cast<double>(rng() % 2);
            i.design(k, 2) = static_cast<double>(rng() % 2);
        }
        return i;
    }();
    return in;
}

template <bool Parallel>
void BM_accumulate(benchmark::State& state) {
    const auto& in = inputs();
    const double sigma = smoothing::sigma_from_diameter(static_cast<double>(state.range(0)));
    KernelSource src{in.locations, &in.design, sigma, 4.0 * sigma, 1.0};
    AccumulateLayout layout{3, true};
    std::vector<double> out(in.domain.cell_count() * layout.stride());
    for (auto _ : state) {
        std::fill(out.begin(), out.end(), 0.0);
        if constexpr (Parallel) accumulate_parallel(in.domain, src, layout, out);
        else accumulate_serial(in.domain, src, layout, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_glm_cells(benchmark::State& state) {
    const std::size_t cells = 220 * 210;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(20, 3);
    const Eigen::MatrixXd pinv = (a.transpose() * a).inverse();
    std::vector<std::vector<double>> xty(3, std::vector<double>(cells)), beta = xty;
    std::vector<double> yty(cells), rss(cells);
    for (std::size_t v = 0; v < cells; ++v) {
        for (auto& f : xty) f[v] = z(rng);
        yty[v] = 100.0;
    }
    GlmCellsInput in{&pinv, {xty[0], xty[1], xty[2]}, yty};
    GlmCellsOutput out{{beta[0], beta[1], beta[2]}, rss, 0};
    for (auto _ : state) {
        if constexpr (Parallel) glm_cells_parallel(in, out);
        else glm_cells_serial(in, out);
        benchmark::DoNotOptimize(rss.data());
    }
}

template <bool Parallel>
void BM_kriging_cells(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 60.0);
    std::vector<Point2> pts;
    for (Eigen::Index i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    kriging::CovarianceModel m;
    m.range_phi = 5.0;
    m.nugget = 0.1;
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& p = pts[static_cast<std::size_t>(i)];
            const auto& q = pts[static_cast<std::size_t>(j)];
            c(i, j) = i == j ? m.total_sill() : m.covariance(std::hypot(p.x - q.x, p.y - q.y));
        }
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    KrigingSystem sys;
    sys.chol = &llt;
    sys.data = pts;
    sys.cinv_ones = llt.solve(Eigen::VectorXd::Ones(n));
    sys.ones_cinv_ones = sys.cinv_ones.sum();
    sys.residual_weights = Eigen::VectorXd::Zero(n);
    sys.total_sill = m.total_sill();
    const SpatialDomain d(60, 60);
    std::vector<Point2> targets;
    for (std::size_t k = 0; k < d.cell_count(); ++k) targets.push_back(cell_center(d, d.cell_at(k)));
    std::vector<double> mean(targets.size()), var(targets.size());
    for (auto _ : state) {
        KrigingCellsOutput out{mean, var, 0};
        if constexpr (Parallel) kriging_cells_parallel(sys, m, targets, out);
        else kriging_cells_serial(sys, m, targets, out);
        benchmark::DoNotOptimize(var.data());
    }
}

template <bool Parallel>
void BM_distance_transform(benchmark::State& state) {
    const SpatialDomain d(220, 210);
    BinaryMap mask(d);
    std::mt19937_64 rng(4);
    for (std::size_t v = 0; v < mask.size(); ++v) mask.set(v, rng() % 50 == 0);
    for (auto _ : state) {
        auto out = Parallel ? squared_distance_transform_parallel(mask) : squared_distance_transform_serial(mask);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(BM_accumulate<false>)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_accumulate<true>)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_glm_cells<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_glm_cells<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kriging_cells<false>)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kriging_cells<true>)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_distance_transform<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_distance_transform<true>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
