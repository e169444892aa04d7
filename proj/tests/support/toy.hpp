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

#include <random>
#include <string>
#include <vector>

#include "geospm/grid_domain.hpp"

namespace toy {

/// Uniform locations on `domain` with P standard-normal variables v1..vP.
inline geospm::Dataset random_dataset(const geospm::SpatialDomain& domain, std::size_t n, std::size_t p,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> z(0.0, 1.0);
    geospm::Dataset ds;
    ds.domain = domain;
    for (std::size_t c = 0; c < p; ++c) ds.variable_names.push_back("v" + std::to_string(c + 1));
    for (std::size_t i = 0; i < n; ++i) {
        geospm::Observation o;
        o.location = {domain.origin().x + u(rng) * domain.width() * domain.cell_size() * 0.999999,
                      domain.origin().y + u(rng) * domain.height() * domain.cell_size() * 0.999999};
        for (std::size_t c = 0; c < p; ++c) o.values.push_back(z(rng));
        ds.observations.push_back(std::move(o));
    }
    return ds;
}

inline std::vector<geospm::Point2> locations(const geospm::Dataset& ds) {
    std::vector<geospm::Point2> out;
    for (const auto& o : ds.observations) out.push_back(o.location);
    return out;
}

inline geospm::BinaryMap random_map(const geospm::SpatialDomain& d, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution b(density);
    geospm::BinaryMap m(d);
    for (std::size_t v = 0; v < m.size(); ++v) m.set(v, b(rng));
    return m;
}

}  // namespace toy
