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

#include <array>
#include <cstdint>
#include <string_view>

namespace geospm {

/// Counter-based Philox4x32-10 generator (Salmon et al., Random123).
///
/// Every draw is a pure function of (key, counter), so parallel workers can
/// partition the counter space without sharing state. Datasets record
/// `algorithm_id` so they can be regenerated by any conforming implementation.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    static constexpr std::string_view algorithm_id = "philox4x32-10";

    explicit Philox4x32(std::uint64_t seed) : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    Block block(std::uint64_t stream, std::uint64_t index) const;

    /// Two uniform doubles in [0, 1) with 53-bit resolution from one block.
    std::array<double, 2> uniform_pair(std::uint64_t stream, std::uint64_t index) const;

private:
    std::array<std::uint32_t, 2> key_;
};

/// Uniform double in [0, 1) from 64 random bits.
inline double to_unit_double(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

/// 64-bit mixing hash (splitmix64 finaliser). Used to derive per-run seeds.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash_string(std::string_view s);

}  // namespace geospm
