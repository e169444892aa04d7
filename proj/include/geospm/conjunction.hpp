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

#include <string>
#include <vector>

#include "geospm/glm.hpp"
#include "geospm/grid_domain.hpp"

namespace geospm::conjunction {

/// Provenance of one thresholded input map.
struct MapSource {
    std::string variable;
    std::string model;
    glm::Tail tail = glm::Tail::positive;
    /// Set when a two-sided map enters without being split by sign.
    bool unsigned_two_sided() const { return tail == glm::Tail::two_sided; }
};

struct ConjunctionResult {
    BinaryMap map;
    std::vector<MapSource> inputs;
    /// True when any input is an unsigned two-sided map, whose direction is ambiguous.
    bool unsigned_inputs = false;
};

/// Cellwise AND of at least two maps on a shared domain.
BinaryMap intersect(const std::vector<BinaryMap>& maps);

ConjunctionResult conjoin(const std::vector<BinaryMap>& maps, const std::vector<MapSource>& sources);

}  // namespace geospm::conjunction
