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

#include "geospm/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "geospm/kernels.hpp"

namespace geospm::smoothing {

namespace {

// Radius enclosing 95% of the mass is sigma * sqrt(2 ln 20).
const double kRadiusPerSigma = std::sqrt(2.0 * std::log(20.0));

}  // namespace

double sigma_from_diameter(double diameter) {
    if (!(diameter > 0.0) || !std::isfinite(diameter)) throw DomainError("smoothing diameter must be positive");
    return diameter / (2.0 * kRadiusPerSigma);
}

double diameter_from_sigma(double sigma) {
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    return 2.0 * kRadiusPerSigma * sigma;
}

KernelSpec::KernelSpec(double s, double r) : sigma(s), truncation_radius(r) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("kernel sigma must be positive");
    if (!(truncation_radius >= 3.0 * sigma)) throw DomainError("truncation radius must be at least 3 sigma");
}

KernelSpec KernelSpec::from_diameter(double diameter, double truncation_sigmas) {
    const double s = sigma_from_diameter(diameter);
    return {s, truncation_sigmas * s};
}

SmoothingSchedule::SmoothingSchedule(std::vector<double> diameters) : diameters_(std::move(diameters)) {
    for (std::size_t i = 0; i < diameters_.size(); ++i) {
        if (!(diameters_[i] > 0.0)) throw DomainError("smoothing diameters must be positive");
        if (i > 0 && !(diameters_[i] > diameters_[i - 1]))
            throw DomainError("smoothing diameters must be strictly increasing");
    }
}

SmoothingSchedule SmoothingSchedule::parse(const std::string& text) {
    std::vector<double> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ':')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DomainError("invalid diameter schedule '" + text + "'");
        }
        if (used != item.size()) throw DomainError("invalid diameter schedule '" + text + "'");
        parts.push_back(v);
    }
    if (parts.size() == 1) return SmoothingSchedule({parts[0]});
    if (parts.size() != 3) throw DomainError("diameter schedule must be 'd' or 'lo:hi:step'");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || hi < lo) throw DomainError("diameter schedule needs lo <= hi and step > 0");
    std::vector<double> d;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) d.push_back(lo + static_cast<double>(i) * step);
    return SmoothingSchedule(std::move(d));
}

SmoothingSchedule SmoothingSchedule::synthetic_default() { return parse("10:60:5"); }

Point2 congruent_location(const SpatialDomain& domain, Point2 location) {
    return cell_center(domain, world_to_cell(domain, location));
}

ScalarField render_kernel(Point2 location, const KernelSpec& kernel, const SpatialDomain& domain) {
    if (!domain.contains(location)) throw DomainError("kernel location outside domain");
    ScalarField field(domain);
    const double norm = domain.cell_area() / (2.0 * std::numbers::pi * kernel.sigma * kernel.sigma);
    const double r2 = kernel.truncation_radius * kernel.truncation_radius;
    for (std::size_t v = 0; v < field.size(); ++v) {
        const Point2 c = cell_center(domain, domain.cell_at(v));
        const double d2 = (c.x - location.x) * (c.x - location.x) + (c.y - location.y) * (c.y - location.y);
        if (d2 <= r2) field[v] = norm * std::exp(-d2 / (2.0 * kernel.sigma * kernel.sigma));
    }
    return field;
}

ResponseAccumulators ResponseAccumulators::subset(const std::vector<std::size_t>& keep) const {
    ResponseAccumulators out;
    out.domain = domain;
    out.observations = observations;
    const auto m = static_cast<Eigen::Index>(keep.size());
    out.xtx.resize(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
        out.columns.push_back(columns.at(keep[static_cast<std::size_t>(r)]));
        for (Eigen::Index c = 0; c < m; ++c)
            out.xtx(r, c) = xtx(static_cast<Eigen::Index>(keep[static_cast<std::size_t>(r)]),
                                static_cast<Eigen::Index>(keep[static_cast<std::size_t>(c)]));
    }
    for (const auto& s : scales) {
        ScaleAccumulator t;
        t.diameter = s.diameter;
        t.kernel = s.kernel;
        for (auto i : keep) t.weighted.push_back(s.weighted.at(i));
        t.sum_squares = s.sum_squares;
        t.density = s.density;
        t.lag_x = s.lag_x;
        t.lag_y = s.lag_y;
        out.scales.push_back(std::move(t));
    }
    return out;
}

ResponseAccumulators accumulate_responses(const Dataset& dataset, const glm::DesignMatrix& design,
                                          const SmoothingSchedule& schedule, const AccumulateOptions& options) {
    if (schedule.empty()) throw DomainError("smoothing schedule is empty");
    if (design.rows() != dataset.size()) throw DomainError("design rows do not match dataset size");
    require_valid(dataset);

    const auto& domain = dataset.domain;
    std::vector<Point2> locations;
    locations.reserve(dataset.size());
    for (const auto& o : dataset.observations)
        locations.push_back(options.congruent ? congruent_location(domain, o.location) : o.location);

    ResponseAccumulators acc;
    acc.domain = domain;
    acc.columns = design.names();
    acc.xtx = design.cross_product();
    acc.observations = dataset.size();

    kernels::AccumulateLayout layout{design.cols(), options.lag_products};
    const std::size_t cells = domain.cell_count();
    const std::size_t stride = layout.stride();
    std::vector<double> buffer;

    for (double diameter : schedule.diameters()) {
        const auto kernel = KernelSpec::from_diameter(diameter, options.truncation_sigmas);
        buffer.assign(cells * stride, 0.0);
        kernels::KernelSource src{locations, &design.matrix(), kernel.sigma, kernel.truncation_radius,
                                  options.amplitude};
        if (options.parallel)
            kernels::accumulate_parallel(domain, src, layout, buffer);
        else
            kernels::accumulate_serial(domain, src, layout, buffer);

        ScaleAccumulator s;
        s.diameter = diameter;
        s.kernel = kernel;
        const std::size_t C = design.cols();
        s.weighted.assign(C, ScalarField(domain));
        s.sum_squares = ScalarField(domain);
        s.density = ScalarField(domain);
        if (options.lag_products) {
            s.lag_x = ScalarField(domain);
            s.lag_y = ScalarField(domain);
        }
        for (std::size_t v = 0; v < cells; ++v) {
            const double* cell = buffer.data() + v * stride;
            for (std::size_t c = 0; c < C; ++c) s.weighted[c][v] = cell[c];
            s.sum_squares[v] = cell[C];
            s.density[v] = cell[C + 1];
            if (options.lag_products) {
                (*s.lag_x)[v] = cell[C + 2];
                (*s.lag_y)[v] = cell[C + 3];
            }
        }
        acc.scales.push_back(std::move(s));
    }
    return acc;
}

BinaryMap density_mask(const ScaleAccumulator& scale, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("density fraction must lie in (0, 1)");
    const double peak = scale.density.max();
    if (!(peak > 0.0)) throw DomainError("density field is zero everywhere; no observations were rendered");
    BinaryMap mask(scale.density.domain());
    const double cut = fraction * peak;
    for (std::size_t v = 0; v < mask.size(); ++v) mask.set(v, scale.density[v] >= cut && scale.density[v] > 0.0);
    return mask;
}

}  // namespace geospm::smoothing
