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

#include <random>

#include <doctest.h>

#include "geospm/conjunction.hpp"
#include "toy.hpp"

using namespace geospm;
using namespace geospm::conjunction;

namespace {

BinaryMap run(const SpatialDomain& d, std::size_t lo, std::size_t hi) {
    BinaryMap m(d);
    for (std::size_t v = lo; v <= hi; ++v) m.set(v, true);
    return m;
}

}  // namespace

TEST_SUITE("conjunction") {

TEST_CASE("identity, annihilator and enumeration") {
    const SpatialDomain d(6, 5);
    std::mt19937_64 rng(1);
    const auto m = toy::random_map(d, 0.4, rng);
    CHECK(intersect({m, BinaryMap(d, true)}) == m);
    CHECK(intersect({m, BinaryMap(d)}).empty());
    CHECK(intersect({run(d, 1, 10), run(d, 5, 15), run(d, 8, 20)}) == run(d, 8, 10));
}

TEST_CASE("algebraic properties") {
    const SpatialDomain d(13, 11);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
        const auto a = toy::random_map(d, 0.5, rng);
        const auto b = toy::random_map(d, 0.6, rng);
        const auto c = toy::random_map(d, 0.7, rng);
        const auto abc = intersect({a, b, c});
        CHECK(intersect({a, b}) == intersect({b, a}));
        CHECK(intersect({intersect({a, b}), c}) == intersect({a, intersect({b, c})}));
        CHECK(intersect({intersect({a, b}), c}) == abc);
        CHECK(intersect({a, a}) == a);
        for (std::size_t v = 0; v < abc.size(); ++v)
            if (abc[v]) CHECK((a[v] && b[v] && c[v]));
    }
}

TEST_CASE("errors and provenance") {
    const SpatialDomain d(4, 4);
    CHECK_THROWS_AS(intersect({BinaryMap(d), BinaryMap(SpatialDomain(4, 5))}), DomainError);
    CHECK_THROWS_AS(intersect({BinaryMap(d)}), std::invalid_argument);

    MapSource pos{"diabetes", "m1", glm::Tail::positive};
    MapSource two{"age", "m1", glm::Tail::two_sided};
    MapSource neg{"age", "m1", glm::Tail::negative};
    CHECK(!conjoin({BinaryMap(d), BinaryMap(d)}, {pos, neg}).unsigned_inputs);
    const auto flagged = conjoin({BinaryMap(d, true), BinaryMap(d, true)}, {pos, two});
    CHECK(flagged.unsigned_inputs);
    CHECK(flagged.inputs.size() == 2);
    CHECK(flagged.map.count() == 16);
    CHECK_THROWS_AS(conjoin({BinaryMap(d), BinaryMap(d)}, {pos}), std::invalid_argument);
}

}
