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

#include "geospm/conjunction.hpp"

#include <stdexcept>

namespace geospm::conjunction {

BinaryMap intersect(const std::vector<BinaryMap>& maps) {
    if (maps.size() < 2) throw std::invalid_argument("conjunction needs at least two maps");
    const auto& dom = maps.front().domain();
    for (const auto& m : maps) require_same_domain(dom, m.domain(), "conjunction inputs");
    BinaryMap out(dom, true);
    for (const auto& m : maps) {
        const auto& raw = m.raw();
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(raw.size()); ++v)
            if (!raw[static_cast<std::size_t>(v)]) out.set(static_cast<std::size_t>(v), false);
    }
    return out;
}

ConjunctionResult conjoin(const std::vector<BinaryMap>& maps, const std::vector<MapSource>& sources) {
    if (sources.size() != maps.size()) throw std::invalid_argument("one source record per conjunction input");
    ConjunctionResult r;
    r.map = intersect(maps);
    r.inputs = sources;
    for (const auto& s : sources) r.unsigned_inputs = r.unsigned_inputs || s.unsigned_two_sided();
    return r;
}

}  // namespace geospm::conjunction
